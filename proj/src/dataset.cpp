#include "dataset.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace qlu {

bool Dataset::is_real() const {
  for (const auto& v : vectors) {
    if (v.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  }
  return true;
}

RealMatrix Dataset::embedding() const {
  const int n = size();
  const int l = dim();
  const bool real = is_real();
  RealMatrix out(n, real ? l : 2 * l);
  for (int i = 0; i < n; ++i) {
    out.row(i).head(l) = vectors[static_cast<std::size_t>(i)].real().transpose();
    if (!real) out.row(i).tail(l) = vectors[static_cast<std::size_t>(i)].imag().transpose();
  }
  return out;
}

void Dataset::validate() const {
  if (vectors.size() < 2) throw InvalidArgument("dataset needs at least two vectors");
  const auto l = vectors.front().size();
  if (l == 0) throw InvalidArgument("dataset vectors are empty");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != l) throw DimensionMismatch("vector " + std::to_string(i) + " has a different length");
    const double norm = vectors[i].norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
      throw InvalidArgument("vector " + std::to_string(i) + " is not unit-norm");
    }
  }
  if (labels && labels->size() != vectors.size()) throw DimensionMismatch("label count != vector count");
}

ComplexVector normalized_state(const RealVector& row) {
  const double norm = row.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
  return (row / norm).cast<Complex>();
}

}  // namespace qlu
