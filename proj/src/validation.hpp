#pragma once

#include <vector>

#include "dataset.hpp"

namespace qlu {

/// Counts n_ij between the distinct labels of two partitions, rows and
/// columns in ascending label order.
struct ContingencyTable {
  std::vector<int> row_labels;
  std::vector<int> col_labels;
  Eigen::MatrixXd counts;
  long long total = 0;
};

ContingencyTable contingency(const Partition& a, const Partition& b);

double rand_index(const Partition& a, const Partition& b);

/// Hubert-Arabie ARI. When the denominator vanishes (both partitions trivial)
/// the result is 1 for identical partitions and 0 otherwise.
double adjusted_rand_index(const Partition& a, const Partition& b);

/// Sum of squared distances to the cluster centroids. Rows of `points` are
/// the embedded vectors. With q > 0 every label in 1..q must be populated.
double compactness(const RealMatrix& points, const Partition& p, int q = 0);

/// Smallest single-linkage distance between clusters over the largest diameter.
double dunn_index(const RealMatrix& points, const Partition& p);

/// Mean silhouette; points in singleton clusters score 0.
double silhouette(const RealMatrix& points, const Partition& p);

/// Minimum-cost assignment of a square matrix: result[row] = column.
std::vector<int> hungarian(const RealMatrix& cost);

/// Fraction of points whose labels agree after optimal alignment of b onto a.
double match_fraction(const Partition& a, const Partition& b);

/// Mean match fraction over all run pairs.
double stability(const std::vector<Partition>& runs);

/// Co-clustering frequencies over the runs.
RealMatrix consensus(const std::vector<Partition>& runs);

/// Average-linkage agglomeration on 1 - C cut at q clusters. Among equal
/// distances the pair with the lexicographically lowest (i, j) merges, where a
/// cluster is identified by its lowest member. Labels 1..q follow the order
/// of each cluster's lowest member.
Partition consensus_clusters(const RealMatrix& c, int q);

/// Number of classes of points that share a cluster in every run (C_ij = 1).
/// Cutting the consensus tree below this count would split such a class.
int unanimous_groups(const RealMatrix& c);

/// Relabels to 1..k by order of first appearance.
Partition canonical(const Partition& p);

}  // namespace qlu
