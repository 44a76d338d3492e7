#pragma once

#include <cstdint>

#include "dataset.hpp"

namespace qlu {

enum class KMeansInit { plus_plus, random };

struct KMeansConfig {
  int k = 2;
  int restarts = 50;
  int max_iters = 300;
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::plus_plus;
  int threads = 1;

  void validate() const;
};

struct KMeansResult {
  Partition partition;  // labels 1..k
  RealMatrix centroids;  // k x D
  double inertia = 0.0;
  int best_restart = 0;
  std::vector<double> inertia_history;  // per Lloyd pass of the best restart
};

/// Lloyd's algorithm on the rows of `points`, best of `restarts` by inertia.
KMeansResult kmeans(const RealMatrix& points, const KMeansConfig& cfg);

/// Same, on the real embedding of the dataset vectors.
KMeansResult kmeans(const Dataset& data, const KMeansConfig& cfg);

}  // namespace qlu
