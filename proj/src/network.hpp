#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "numerics.hpp"
#include "random.hpp"

namespace qlu {

/// Layer sizes: L input nodes, M hidden nodes, q output nodes.
struct Architecture {
  int inputs = 3;
  int hidden = 2;
  int outputs = 4;

  int sites() const { return inputs + hidden + outputs; }
  int first_hidden() const { return inputs; }
  int first_output() const { return inputs + hidden; }
  bool operator==(const Architecture&) const = default;
};

enum class MaskPolicy {
  /// Every edge except input<->output (and no self loops).
  no_direct_io,
  /// Only input<->hidden and hidden<->output edges.
  layered,
};

/// Which hopping entries h_ij are allowed to be non-zero.
class NetworkTopology {
 public:
  NetworkTopology() : NetworkTopology(Architecture{}) {}
  explicit NetworkTopology(const Architecture& arch, MaskPolicy policy = MaskPolicy::no_direct_io,
                           bool allow_onsite = false);
  /// Arbitrary symmetric connectivity; the diagonal of `mask` is ignored.
  NetworkTopology(const Architecture& arch, const std::vector<std::vector<bool>>& mask,
                  bool allow_onsite = false);

  const Architecture& architecture() const { return arch_; }
  int sites() const { return arch_.sites(); }
  bool allow_onsite() const { return allow_onsite_; }
  bool allowed(int i, int j) const;

  /// Upper-triangular (i <= j) entries that training may change, row-major order.
  const std::vector<std::pair<int, int>>& free_entries() const { return free_; }

 private:
  void collect_free_entries();

  Architecture arch_;
  std::vector<std::uint8_t> mask_;  // d x d, symmetric
  bool allow_onsite_ = false;
  std::vector<std::pair<int, int>> free_;
};

/// Real symmetric tight-binding Hamiltonian restricted to a topology.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(NetworkTopology topology);
  Hamiltonian(NetworkTopology topology, RealMatrix h);

  /// Allowed entries i.i.d. uniform on [-h_max, h_max].
  static Hamiltonian random(const NetworkTopology& topology, double h_max, Rng& rng);

  const NetworkTopology& topology() const { return topology_; }
  const RealMatrix& matrix() const { return h_; }
  int sites() const { return topology_.sites(); }
  double at(int i, int j) const { return h_(i, j); }

  /// Sets h_ij and h_ji; throws if the mask forbids the entry.
  void set(int i, int j, double value);

  /// Throws InvalidArgument if h is not symmetric, violates the mask or exceeds h_max.
  void validate(double h_max) const;

  bool operator==(const Hamiltonian& other) const { return h_ == other.h_; }

 private:
  NetworkTopology topology_;
  RealMatrix h_;
};

/// Injection / extraction / dephasing dissipators.
struct LindbladSpec {
  ComplexVector psi;              // length L, unit norm
  double gamma_in = 1.0;          // units of the hopping scale
  double gamma_out = 1.0;
  double gamma_dephase = 0.0;
  std::vector<int> output_sites;  // site indices inside the output layer

  /// Output sites default to the whole output layer in order; psi defaults to e_1.
  static LindbladSpec for_architecture(const Architecture& arch, double gamma_in = 1.0,
                                       double gamma_out = 1.0, double gamma_dephase = 0.0);
  LindbladSpec with_input(const ComplexVector& input) const;
};

/// State on {|vac>, |1>, ..., |d>}; index 0 is the vacuum, site s sits at s + 1.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {}

  const ComplexMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  double vacuum_population() const { return rho_(0, 0).real(); }
  double site_population(int site) const { return rho_(site + 1, site + 1).real(); }
  Complex trace() const { return rho_.trace(); }
  double min_eigenvalue() const;

 private:
  ComplexMatrix rho_;
};

using CurrentVector = RealVector;

/// Superoperator (column-stacking convention) of
///   d rho/dt = -i[H, rho] + sum_k V_k rho V_k^+ - 1/2 {V_k^+ V_k, rho}
/// with V_in = sqrt(g_in) sum_i psi_i |i><vac|, V_out,r = sqrt(g_out) |vac><r|,
/// and V_j = sqrt(g_dep) |j><j| on every site when g_dep > 0.
ComplexMatrix build_liouvillian(const Hamiltonian& h, const LindbladSpec& spec);

/// Unique kernel element of the generator as a unit-trace Hermitian state.
DensityMatrix steady_state(const ComplexMatrix& liouvillian, double tol = kNullSpaceTolerance);

/// j_r = g_out * rho[r, r] for every output port, in port order.
CurrentVector output_currents(const DensityMatrix& rho, const LindbladSpec& spec);

/// Probability flux entering through V_in: g_in * rho[vac, vac].
double injection_current(const DensityMatrix& rho, const LindbladSpec& spec);

/// steady_state + output_currents for one input state (dense reference path).
CurrentVector currents_for_input(const Hamiltonian& h, const LindbladSpec& base_spec,
                                 const ComplexVector& psi);

/// Steady-state currents for many inputs through one fixed network.
///
/// Vacuum/site coherences decay and drop out, so the site block of the
/// steady state is rho_S = rho_vac * X with X solving the linear equation
///   -i[H, X] - 1/2 {G_out, X} + g_dep (diag X - X) = -g_in |psi><psi|.
/// The port populations X_rr and Tr X are linear functionals of |psi><psi|;
/// they are precomputed once per network by solving the adjoint system, after
/// which each input costs O(L^2 q). Results agree with the dense kernel route.
class TransportSolver {
 public:
  /// When the site-block generator is singular (a dark mode that traps
  /// population), every input is solved through the full Liouvillian kernel
  /// instead; those calls throw DegenerateSteadyState if the kernel is not
  /// one-dimensional for that input.
  TransportSolver(const Hamiltonian& h, const LindbladSpec& spec);

  CurrentVector currents(const ComplexVector& psi) const;
  /// Currents for a row-major block of real inputs (N x L) into `out` (N x q).
  void currents(const RealMatrix& inputs, RealMatrix& out) const;
  double vacuum_population(const ComplexVector& psi) const;
  int outputs() const { return outputs_; }
  bool reduced() const { return !dense_; }

 private:
  bool dense_ = false;
  Hamiltonian h_;
  LindbladSpec spec_;
  // Row k < q: X_rr for port k; row q: Tr X. Columns index the L x L input
  // block in (diag, Re upper, Im upper) coordinates, already scaled by -g_in.
  RealMatrix functionals_;
  int inputs_ = 0;
  int outputs_ = 0;
  double gamma_out_ = 0.0;
};

}  // namespace qlu
