#include "validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace qlu {

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

void check_pair(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw DimensionMismatch("partitions differ in length");
  if (a.size() < 2) throw InvalidArgument("need at least two points");
}

void check_points(const RealMatrix& points, const Partition& p) {
  if (points.rows() != p.size()) throw DimensionMismatch("point count != partition length");
  for (int l : p.labels) {
    if (l < 1) throw InvalidArgument("labels must be >= 1");
  }
}

// Member indices per distinct label, ascending label order.
std::vector<std::vector<int>> groups(const Partition& p) {
  std::map<int, std::vector<int>> by_label;
  for (int i = 0; i < p.size(); ++i) by_label[p.labels[static_cast<std::size_t>(i)]].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [label, members] : by_label) out.push_back(std::move(members));
  return out;
}

RealMatrix distances(const RealMatrix& points) {
  const auto n = points.rows();
  RealMatrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
  }
  return d;
}

}  // namespace

ContingencyTable contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw DimensionMismatch("partitions differ in length");
  ContingencyTable t;
  t.row_labels = a.labels;
  t.col_labels = b.labels;
  for (auto* v : {&t.row_labels, &t.col_labels}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  t.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.row_labels.size()),
                                   static_cast<Eigen::Index>(t.col_labels.size()));
  auto index = [](const std::vector<int>& v, int x) {
    return static_cast<Eigen::Index>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  for (int n = 0; n < a.size(); ++n) {
    const auto k = static_cast<std::size_t>(n);
    t.counts(index(t.row_labels, a.labels[k]), index(t.col_labels, b.labels[k])) += 1.0;
  }
  t.total = a.size();
  return t;
}

double rand_index(const Partition& a, const Partition& b) {
  check_pair(a, b);
  const auto t = contingency(a, b);
  double same_both = 0.0;
  for (Eigen::Index i = 0; i < t.counts.size(); ++i) same_both += choose2(t.counts.data()[i]);
  double same_a = 0.0;
  double same_b = 0.0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i) same_a += choose2(t.counts.row(i).sum());
  for (Eigen::Index j = 0; j < t.counts.cols(); ++j) same_b += choose2(t.counts.col(j).sum());
  const double pairs = choose2(static_cast<double>(t.total));
  const double disagreements = (same_a - same_both) + (same_b - same_both);
  return (pairs - disagreements) / pairs;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  check_pair(a, b);
  const auto t = contingency(a, b);
  double index = 0.0;
  for (Eigen::Index i = 0; i < t.counts.size(); ++i) index += choose2(t.counts.data()[i]);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i) sum_a += choose2(t.counts.row(i).sum());
  for (Eigen::Index j = 0; j < t.counts.cols(); ++j) sum_b += choose2(t.counts.col(j).sum());
  // Scaled by C(n, 2) so every term is an integer and the ratio rounds once.
  const double pairs = choose2(static_cast<double>(t.total));
  const double denominator = 0.5 * pairs * (sum_a + sum_b) - sum_a * sum_b;
  if (denominator == 0.0) return canonical(a) == canonical(b) ? 1.0 : 0.0;
  return (pairs * index - sum_a * sum_b) / denominator;
}

double compactness(const RealMatrix& points, const Partition& p, int q) {
  check_points(points, p);
  if (q > 0) {
    std::vector<int> seen(static_cast<std::size_t>(q), 0);
    for (int l : p.labels) {
      if (l > q) throw InvalidArgument("label " + std::to_string(l) + " exceeds q");
      seen[static_cast<std::size_t>(l - 1)] = 1;
    }
    for (int k = 0; k < q; ++k) {
      if (!seen[static_cast<std::size_t>(k)]) throw InvalidArgument("cluster " + std::to_string(k + 1) + " is empty");
    }
  }
  double total = 0.0;
  for (const auto& g : groups(p)) {
    RealVector centroid = RealVector::Zero(points.cols());
    for (int i : g) centroid += points.row(i).transpose();
    centroid /= static_cast<double>(g.size());
    for (int i : g) total += (points.row(i).transpose() - centroid).squaredNorm();
  }
  return total;
}

double dunn_index(const RealMatrix& points, const Partition& p) {
  check_points(points, p);
  const auto gs = groups(p);
  if (gs.size() < 2) throw InvalidArgument("Dunn index needs at least two clusters");
  const RealMatrix d = distances(points);
  double diameter = 0.0;
  for (const auto& g : gs) {
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a + 1; b < g.size(); ++b) diameter = std::max(diameter, d(g[a], g[b]));
    }
  }
  if (diameter == 0.0) throw InvalidArgument("Dunn index undefined: every cluster has zero diameter");
  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < gs.size(); ++x) {
    for (std::size_t y = x + 1; y < gs.size(); ++y) {
      for (int i : gs[x]) {
        for (int j : gs[y]) separation = std::min(separation, d(i, j));
      }
    }
  }
  return separation / diameter;
}

double silhouette(const RealMatrix& points, const Partition& p) {
  check_points(points, p);
  const auto gs = groups(p);
  if (gs.size() < 2) throw InvalidArgument("silhouette needs at least two clusters");
  const RealMatrix d = distances(points);
  std::vector<std::size_t> owner(static_cast<std::size_t>(p.size()));
  for (std::size_t g = 0; g < gs.size(); ++g) {
    for (int i : gs[g]) owner[static_cast<std::size_t>(i)] = g;
  }
  double total = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const auto own = owner[static_cast<std::size_t>(i)];
    if (gs[own].size() == 1) continue;
    double a = 0.0;
    for (int j : gs[own]) a += d(i, j);
    a /= static_cast<double>(gs[own].size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < gs.size(); ++g) {
      if (g == own) continue;
      double m = 0.0;
      for (int j : gs[g]) m += d(i, j);
      b = std::min(b, m / static_cast<double>(gs[g].size()));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / p.size();
}

std::vector<int> hungarian(const RealMatrix& cost) {
  if (cost.rows() != cost.cols()) throw DimensionMismatch("hungarian needs a square matrix");
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};
  if (!cost.allFinite()) throw InvalidArgument("hungarian needs finite costs");
  // Shortest augmenting paths with row/column potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(match[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) result[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return result;
}

double match_fraction(const Partition& a, const Partition& b) {
  check_pair(a, b);
  const auto t = contingency(a, b);
  const auto k = std::max(t.counts.rows(), t.counts.cols());
  RealMatrix padded = RealMatrix::Zero(k, k);
  padded.topLeftCorner(t.counts.rows(), t.counts.cols()) = -t.counts;
  const auto assignment = hungarian(padded);
  double matched = 0.0;
  for (Eigen::Index r = 0; r < k; ++r) matched -= padded(r, assignment[static_cast<std::size_t>(r)]);
  return matched / a.size();
}

double stability(const std::vector<Partition>& runs) {
  if (runs.size() < 2) throw InvalidArgument("stability needs at least two runs");
  double total = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      total += match_fraction(runs[i], runs[j]);
      pairs += 1.0;
    }
  }
  return total / pairs;
}

RealMatrix consensus(const std::vector<Partition>& runs) {
  if (runs.empty()) throw InvalidArgument("consensus needs at least one run");
  const int n = runs.front().size();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (const auto& r : runs) {
    if (r.size() != n) throw DimensionMismatch("runs differ in length");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (r.labels[static_cast<std::size_t>(i)] == r.labels[static_cast<std::size_t>(j)]) c(i, j) += 1.0;
      }
    }
  }
  return c / static_cast<double>(runs.size());
}

Partition consensus_clusters(const RealMatrix& c, int q) {
  const int n = static_cast<int>(c.rows());
  if (c.cols() != n) throw DimensionMismatch("consensus matrix must be square");
  if (q < 1 || q > n) throw InvalidArgument("cluster count must lie in 1..N");

  // Active clusters keyed by their lowest member; link(a, b) holds the sum of
  // pairwise distances, so average linkage is link / (|a| |b|).
  RealMatrix link = RealMatrix::Ones(n, n) - c;
  link = 0.5 * (link + link.transpose()).eval();
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<int> owner(static_cast<std::size_t>(n));
  std::iota(owner.begin(), owner.end(), 0);
  std::vector<char> active(static_cast<std::size_t>(n), 1);

  for (int clusters = n; clusters > q; --clusters) {
    int bi = -1;
    int bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        const double avg = link(i, j) / (static_cast<double>(size[static_cast<std::size_t>(i)]) *
                                         size[static_cast<std::size_t>(j)]);
        if (bi < 0 || avg < best - 1e-12 * std::max(1.0, std::abs(best))) {
          best = avg;
          bi = i;
          bj = j;
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      link(bi, k) += link(bj, k);
      link(k, bi) = link(bi, k);
    }
    size[static_cast<std::size_t>(bi)] += size[static_cast<std::size_t>(bj)];
    active[static_cast<std::size_t>(bj)] = 0;
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }

  std::vector<int> label_of(static_cast<std::size_t>(n), 0);
  int next = 0;
  Partition p;
  for (int i = 0; i < n; ++i) {
    auto& l = label_of[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])];
    if (l == 0) l = ++next;
    p.labels.push_back(l);
  }
  return p;
}

int unanimous_groups(const RealMatrix& c) {
  const int n = static_cast<int>(c.rows());
  if (c.cols() != n) throw DimensionMismatch("consensus matrix must be square");
  std::vector<int> root(static_cast<std::size_t>(n), -1);
  int groups = 0;
  for (int i = 0; i < n; ++i) {
    if (root[static_cast<std::size_t>(i)] >= 0) continue;
    ++groups;
    for (int j = i; j < n; ++j) {
      if (root[static_cast<std::size_t>(j)] < 0 && c(i, j) >= 1.0 - 1e-12) root[static_cast<std::size_t>(j)] = i;
    }
  }
  return groups;
}

Partition canonical(const Partition& p) {
  std::map<int, int> relabel;
  Partition out;
  for (int l : p.labels) {
    const auto [it, inserted] = relabel.emplace(l, static_cast<int>(relabel.size()) + 1);
    out.labels.push_back(it->second);
  }
  return out;
}

}  // namespace qlu
