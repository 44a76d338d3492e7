#include "baseline.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace qlu {

namespace {

struct Run {
  std::vector<int> assignment;
  RealMatrix centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> history;
};

RealMatrix seed_centroids(const RealMatrix& x, int k, KMeansInit init, Rng& rng) {
  const auto n = x.rows();
  RealMatrix c(k, x.cols());
  if (init == KMeansInit::random) {
    // k distinct rows by partial Fisher-Yates.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int j = 0; j < k; ++j) {
      const auto pick = j + uniform_index(rng, static_cast<std::size_t>(n - j));
      std::swap(idx[static_cast<std::size_t>(j)], idx[pick]);
      c.row(j) = x.row(idx[static_cast<std::size_t>(j)]);
    }
    return c;
  }
  c.row(0) = x.row(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n))));
  RealVector d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      const double target = uniform(rng, 0.0, total);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= target && d2(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(n)));
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

Run lloyd(const RealMatrix& x, const KMeansConfig& cfg, Rng& rng) {
  const auto n = x.rows();
  const int k = cfg.k;
  Run run;
  run.centroids = seed_centroids(x, k, cfg.init, rng);
  run.assignment.assign(static_cast<std::size_t>(n), -1);
  RealVector dist(n);
  double previous = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.max_iters; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double d = (x.row(i) - run.centroids.row(j)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      auto& a = run.assignment[static_cast<std::size_t>(i)];
      if (a != best) changed = true;
      a = best;
      dist(i) = best_d;
      inertia += best_d;
    }

    // Empty clusters take the point farthest from its centroid.
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : run.assignment) ++counts[static_cast<std::size_t>(a)];
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Eigen::Index far = 0;
      for (Eigen::Index i = 1; i < n; ++i) {
        if (dist(i) > dist(far) && counts[static_cast<std::size_t>(run.assignment[static_cast<std::size_t>(i)])] > 1) {
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(run.assignment[static_cast<std::size_t>(far)])];
      run.assignment[static_cast<std::size_t>(far)] = j;
      counts[static_cast<std::size_t>(j)] = 1;
      inertia -= dist(far);
      dist(far) = 0.0;
      changed = true;
    }

    run.centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) run.centroids.row(run.assignment[static_cast<std::size_t>(i)]) += x.row(i);
    for (int j = 0; j < k; ++j) run.centroids.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);

    run.history.push_back(inertia);
    const bool stalled = std::isfinite(previous) && std::abs(previous - inertia) < 1e-9 * std::abs(previous);
    previous = inertia;
    if (!changed || stalled) break;
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia += (x.row(i) - run.centroids.row(run.assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return run;
}

}  // namespace

void KMeansConfig::validate() const {
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");
  if (max_iters < 1) throw InvalidArgument("kmeans: max_iters must be >= 1");
  if (threads < 1) throw InvalidArgument("kmeans: threads must be >= 1");
}

KMeansResult kmeans(const RealMatrix& points, const KMeansConfig& cfg) {
  cfg.validate();
  if (points.rows() < cfg.k) {
    throw InvalidArgument("kmeans: " + std::to_string(points.rows()) + " points < k = " + std::to_string(cfg.k));
  }
  if (!points.allFinite()) throw InvalidArgument("kmeans: non-finite coordinates");

  std::vector<Run> runs(static_cast<std::size_t>(cfg.restarts));
  WorkerPool pool(cfg.threads);
  pool.run(cfg.restarts, [&](int r) {
    Rng rng = substream(mix64(cfg.seed) ^ static_cast<std::uint64_t>(r), "kmeans");
    runs[static_cast<std::size_t>(r)] = lloyd(points, cfg, rng);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  KMeansResult out;
  for (int a : runs[best].assignment) out.partition.labels.push_back(a + 1);
  out.centroids = std::move(runs[best].centroids);
  out.inertia = runs[best].inertia;
  out.best_restart = static_cast<int>(best);
  out.inertia_history = std::move(runs[best].history);
  return out;
}

KMeansResult kmeans(const Dataset& data, const KMeansConfig& cfg) { return kmeans(data.embedding(), cfg); }

}  // namespace qlu
