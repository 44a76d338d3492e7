#pragma once

#include <optional>
#include <vector>

#include "numerics.hpp"

namespace qlu {

/// Cluster labels 1..q, one per input.
struct Partition {
  std::vector<int> labels;
  int size() const { return static_cast<int>(labels.size()); }
  bool operator==(const Partition&) const = default;
};

/// Unit-norm state vectors plus optional ground truth. Ground-truth labels are
/// carried for external validation only; training never reads them.
struct Dataset {
  std::vector<ComplexVector> vectors;
  std::optional<std::vector<int>> labels;

  int size() const { return static_cast<int>(vectors.size()); }
  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }
  bool is_real() const;

  /// N x L real parts when every imaginary part vanishes, otherwise N x 2L
  /// (real parts then imaginary parts). Euclidean distances on this
  /// embedding equal distances between the complex vectors.
  RealMatrix embedding() const;

  /// Throws if vectors are ragged, not unit-norm (1e-9), fewer than two,
  /// or labels have the wrong length.
  void validate() const;
};

/// Scales a real row to unit norm; throws on a zero row.
ComplexVector normalized_state(const RealVector& row);

}  // namespace qlu
