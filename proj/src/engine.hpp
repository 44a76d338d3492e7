#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "network.hpp"
#include "random.hpp"

namespace qlu {

enum class CostMode { clustering, localization };

/// How a selected hopping entry is redrawn.
struct MutationLaw {
  enum class Kind {
    uniform,   // fresh draw on [-h_max, h_max]
    constant,  // always `value`
    gaussian,  // old value + value * N(0, 1)
  };
  Kind kind = Kind::uniform;
  double value = 0.0;
};

struct TrainingConfig {
  Architecture architecture;
  MaskPolicy mask = MaskPolicy::no_direct_io;
  bool allow_onsite = false;
  int max_iterations = 5000;  // T; rejected iterations count too
  int particles = 8;          // P candidate values per iteration
  double h_max = 2.0;
  MutationLaw mutation;
  std::uint64_t seed = 0;
  CostMode cost_mode = CostMode::clustering;
  int window = 200;         // convergence window in iterations
  double min_delta = 1e-4;  // relative improvement required per window
  int threads = 1;
  int init_retries = 32;

  void validate() const;
};

/// One pass of the optimization loop.
struct TrainingStep {
  int iteration = 0;
  std::pair<int, int> entry{0, 0};
  std::vector<double> candidate_values;
  std::vector<double> candidate_costs;  // +inf for rejected (degenerate) networks
  bool accepted = false;
  double cost = 0.0;  // incumbent cost after this iteration
  bool operator==(const TrainingStep&) const = default;
};

struct TrainingTrace {
  std::vector<double> accepted_costs;  // initial cost first, then every accepted move
  std::vector<int> accepted_iterations;
  std::vector<TrainingStep> steps;
  Hamiltonian final_hamiltonian;
  long long network_solves = 0;  // candidate networks factorized
  long long input_solves = 0;    // per-input steady-state evaluations
  int init_attempts = 0;
  bool converged = false;

  /// Line-delimited log: the initial cost, then one line per iteration.
  void write_log(std::ostream& os) const;
};

struct TrainingResult {
  Hamiltonian hamiltonian;
  Partition partition;
  TrainingTrace trace;
};

/// Row n is the indicator of argmax_i J(n, i); ties go to the lowest index.
RealMatrix one_hot_targets(const RealMatrix& currents);

/// sum_n ||I_n - J_n||^2 with targets recomputed from the currents themselves.
double clustering_cost(const RealMatrix& currents);

/// Target for a two-port current pair: [1,0] when only J1 sits in the
/// moderate band [0.4, 0.6], [0,1] when only J2 does, [0.5,0.5] otherwise.
Eigen::Vector2d localization_tags(const Eigen::Ref<const RealVector>& currents);

/// sum_n ||tags(J_n) - J_n||^2; requires q = 2.
double localization_cost(const RealMatrix& currents);

double cost(const RealMatrix& currents, CostMode mode);

/// Labels 1..q by row-wise argmax (lowest index on ties).
Partition argmax_partition(const RealMatrix& currents);

struct CandidateSet {
  std::pair<int, int> entry;
  std::vector<double> values;
  std::vector<Hamiltonian> hamiltonians;
};

/// Picks one free entry uniformly and builds P copies of `h` that differ only
/// at that symmetric pair, each with an independent draw clipped to [-h_max, h_max].
CandidateSet mutate_candidates(const Hamiltonian& h, Rng& rng, int particles, const MutationLaw& law,
                               double h_max);

/// N x q steady-state currents of every dataset vector.
RealMatrix current_matrix(const Hamiltonian& h, const Dataset& data, const LindbladSpec& spec);

/// Accept-if-lower stochastic search over hopping amplitudes.
TrainingResult train(const Dataset& data, const LindbladSpec& spec, const TrainingConfig& cfg);

/// Assigns each input to the port with the largest steady-state current.
Partition assign(const Hamiltonian& h, const Dataset& data, const LindbladSpec& spec);

}  // namespace qlu
