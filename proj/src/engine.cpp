#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace qlu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int argmax_row(const Eigen::Ref<const RealVector>& row) {
  int best = 0;
  for (int i = 1; i < row.size(); ++i) {
    if (row(i) > row(best)) best = i;
  }
  return best;
}

bool in_band(double x) { return x >= 0.4 && x <= 0.6; }

// Inputs as a real N x L block when possible (fast batched path).
struct PreparedInputs {
  bool real = false;
  RealMatrix block;
};

PreparedInputs prepare(const Dataset& data) {
  PreparedInputs p;
  p.real = data.is_real();
  if (p.real) p.block = data.embedding();
  return p;
}

void evaluate(const TransportSolver& solver, const Dataset& data, const PreparedInputs& inputs,
              RealMatrix& out) {
  if (inputs.real) {
    solver.currents(inputs.block, out);
    return;
  }
  out.resize(data.size(), solver.outputs());
  for (int n = 0; n < data.size(); ++n) {
    out.row(n) = solver.currents(data.vectors[static_cast<std::size_t>(n)]).transpose();
  }
}

}  // namespace

void TrainingConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("training: T must be >= 1");
  if (particles < 1) throw InvalidArgument("training: P must be >= 1");
  if (!(h_max > 0.0)) throw InvalidArgument("training: h_max must be > 0");
  if (window < 1) throw InvalidArgument("training: convergence window must be >= 1");
  if (min_delta < 0.0) throw InvalidArgument("training: min_delta must be >= 0");
  if (threads < 1) throw InvalidArgument("training: threads must be >= 1");
  if (init_retries < 1) throw InvalidArgument("training: init_retries must be >= 1");
  if (cost_mode == CostMode::localization && architecture.outputs != 2) {
    throw InvalidArgument("training: the localization cost needs exactly two outputs");
  }
}

// ---------------------------------------------------------------------------
// Costs

RealMatrix one_hot_targets(const RealMatrix& currents) {
  RealMatrix out = RealMatrix::Zero(currents.rows(), currents.cols());
  if (currents.cols() == 0) return out;
  for (Eigen::Index n = 0; n < currents.rows(); ++n) out(n, argmax_row(currents.row(n).transpose())) = 1.0;
  return out;
}

double clustering_cost(const RealMatrix& currents) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < currents.rows(); ++n) {
    const int best = currents.cols() > 0 ? argmax_row(currents.row(n).transpose()) : 0;
    for (Eigen::Index i = 0; i < currents.cols(); ++i) {
      const double diff = (i == best ? 1.0 : 0.0) - currents(n, i);
      total += diff * diff;
    }
  }
  return total;
}

Eigen::Vector2d localization_tags(const Eigen::Ref<const RealVector>& currents) {
  if (currents.size() != 2) throw InvalidArgument("localization tags need exactly two currents");
  const bool first = in_band(currents(0));
  const bool second = in_band(currents(1));
  if (first && !second) return {1.0, 0.0};
  if (second && !first) return {0.0, 1.0};
  return {0.5, 0.5};
}

double localization_cost(const RealMatrix& currents) {
  if (currents.cols() != 2) throw InvalidArgument("localization cost needs exactly two outputs");
  double total = 0.0;
  for (Eigen::Index n = 0; n < currents.rows(); ++n) {
    const RealVector row = currents.row(n).transpose();
    total += (localization_tags(row) - row).squaredNorm();
  }
  return total;
}

double cost(const RealMatrix& currents, CostMode mode) {
  return mode == CostMode::clustering ? clustering_cost(currents) : localization_cost(currents);
}

Partition argmax_partition(const RealMatrix& currents) {
  Partition p;
  p.labels.reserve(static_cast<std::size_t>(currents.rows()));
  for (Eigen::Index n = 0; n < currents.rows(); ++n) {
    p.labels.push_back(argmax_row(currents.row(n).transpose()) + 1);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Mutation

CandidateSet mutate_candidates(const Hamiltonian& h, Rng& rng, int particles, const MutationLaw& law,
                               double h_max) {
  if (particles < 1) throw InvalidArgument("mutate_candidates: need at least one particle");
  const auto& free = h.topology().free_entries();
  if (free.empty()) throw InvalidArgument("mutate_candidates: the topology has no free entries");

  CandidateSet set;
  set.entry = free[uniform_index(rng, free.size())];
  const auto [i, j] = set.entry;
  const double old = h.at(i, j);
  for (int p = 0; p < particles; ++p) {
    double v = 0.0;
    switch (law.kind) {
      case MutationLaw::Kind::uniform:
        v = uniform(rng, -h_max, h_max);
        break;
      case MutationLaw::Kind::constant:
        v = law.value;
        break;
      case MutationLaw::Kind::gaussian:
        v = old + law.value * standard_normal(rng);
        break;
    }
    v = std::clamp(v, -h_max, h_max);
    set.values.push_back(v);
    Hamiltonian candidate = h;
    candidate.set(i, j, v);
    set.hamiltonians.push_back(std::move(candidate));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Training

RealMatrix current_matrix(const Hamiltonian& h, const Dataset& data, const LindbladSpec& spec) {
  const TransportSolver solver(h, spec.with_input(ComplexVector::Unit(h.topology().architecture().inputs, 0)));
  RealMatrix out;
  evaluate(solver, data, prepare(data), out);
  return out;
}

Partition assign(const Hamiltonian& h, const Dataset& data, const LindbladSpec& spec) {
  return argmax_partition(current_matrix(h, data, spec));
}

TrainingResult train(const Dataset& data, const LindbladSpec& spec_template, const TrainingConfig& cfg) {
  cfg.validate();
  data.validate();
  const Architecture& arch = cfg.architecture;
  if (data.dim() != arch.inputs) {
    throw DimensionMismatch("dataset dimension " + std::to_string(data.dim()) + " != " +
                            std::to_string(arch.inputs) + " input nodes");
  }
  LindbladSpec spec = spec_template;
  spec.psi = ComplexVector::Unit(arch.inputs, 0);
  if (spec.output_sites.empty()) {
    for (int r = 0; r < arch.outputs; ++r) spec.output_sites.push_back(arch.first_output() + r);
  }
  if (static_cast<int>(spec.output_sites.size()) != arch.outputs) {
    throw DimensionMismatch("output port list does not match q");
  }

  const NetworkTopology topology(arch, cfg.mask, cfg.allow_onsite);
  const PreparedInputs inputs = prepare(data);
  const long long n_inputs = data.size();
  TrainingTrace trace;

  auto evaluate_cost = [&](const Hamiltonian& h, RealMatrix& j) -> double {
    try {
      const TransportSolver solver(h, spec);
      evaluate(solver, data, inputs, j);
    } catch (const DegenerateSteadyState&) {
      return kInf;
    }
    const double c = cost(j, cfg.cost_mode);
    return std::isfinite(c) ? c : kInf;
  };

  Rng init_rng = substream(cfg.seed, "init");
  Rng mutation_rng = substream(cfg.seed, "mutation");

  Hamiltonian incumbent;
  RealMatrix incumbent_currents;
  double incumbent_cost = kInf;
  for (int attempt = 0; attempt < cfg.init_retries && !std::isfinite(incumbent_cost); ++attempt) {
    incumbent = Hamiltonian::random(topology, cfg.h_max, init_rng);
    incumbent_cost = evaluate_cost(incumbent, incumbent_currents);
    ++trace.network_solves;
    trace.input_solves += n_inputs;
    trace.init_attempts = attempt + 1;
  }
  if (!std::isfinite(incumbent_cost)) {
    throw DegenerateSteadyState("no non-degenerate initial network after " +
                                std::to_string(cfg.init_retries) + " draws");
  }
  trace.accepted_costs.push_back(incumbent_cost);
  trace.accepted_iterations.push_back(0);

  WorkerPool pool(cfg.threads);
  std::vector<double> costs(static_cast<std::size_t>(cfg.particles));
  std::vector<RealMatrix> currents(static_cast<std::size_t>(cfg.particles));
  double window_reference = incumbent_cost;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    CandidateSet set = mutate_candidates(incumbent, mutation_rng, cfg.particles, cfg.mutation, cfg.h_max);
    pool.run(cfg.particles, [&](int p) {
      const auto k = static_cast<std::size_t>(p);
      costs[k] = evaluate_cost(set.hamiltonians[k], currents[k]);
    });
    trace.network_solves += cfg.particles;
    trace.input_solves += n_inputs * cfg.particles;

    std::size_t best = 0;
    for (std::size_t k = 1; k < costs.size(); ++k) {
      if (costs[k] < costs[best]) best = k;
    }
    TrainingStep step;
    step.iteration = it;
    step.entry = set.entry;
    step.candidate_values = set.values;
    step.candidate_costs = costs;
    if (costs[best] < incumbent_cost) {
      incumbent = std::move(set.hamiltonians[best]);
      incumbent_currents = std::move(currents[best]);
      incumbent_cost = costs[best];
      step.accepted = true;
      trace.accepted_costs.push_back(incumbent_cost);
      trace.accepted_iterations.push_back(it);
    }
    step.cost = incumbent_cost;
    trace.steps.push_back(std::move(step));

    if (it % cfg.window == 0) {
      const double gain = window_reference - incumbent_cost;
      if (gain < cfg.min_delta * std::abs(window_reference)) {
        trace.converged = true;
        break;
      }
      window_reference = incumbent_cost;
    }
  }

  TrainingResult result;
  result.partition = argmax_partition(incumbent_currents);
  trace.final_hamiltonian = incumbent;
  result.hamiltonian = std::move(incumbent);
  result.trace = std::move(trace);
  return result;
}

void TrainingTrace::write_log(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "initial draws=" << init_attempts << " cost=" << (accepted_costs.empty() ? 0.0 : accepted_costs.front())
     << '\n';
  for (const auto& s : steps) {
    os << "iteration=" << s.iteration << " entry=" << s.entry.first << "," << s.entry.second
       << " accepted=" << (s.accepted ? 1 : 0) << " cost=" << s.cost << " candidates=";
    for (std::size_t k = 0; k < s.candidate_costs.size(); ++k) {
      if (k) os << ';';
      os << s.candidate_values[k] << ':' << s.candidate_costs[k];
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qlu
