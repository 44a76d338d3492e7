#include "network.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "errors.hpp"

namespace qlu {

namespace {

enum class Layer { input, hidden, output };

Layer layer_of(const Architecture& arch, int site) {
  if (site < arch.first_hidden()) return Layer::input;
  if (site < arch.first_output()) return Layer::hidden;
  return Layer::output;
}

void check_architecture(const Architecture& arch) {
  if (arch.inputs < 1 || arch.hidden < 0 || arch.outputs < 2) {
    throw InvalidArgument("architecture " + std::to_string(arch.inputs) + "-" +
                          std::to_string(arch.hidden) + "-" + std::to_string(arch.outputs) +
                          ": need L >= 1, M >= 0, q >= 2");
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Adds the dissipator of jump operator v to the superoperator.
void add_dissipator(ComplexMatrix& lv, const ComplexMatrix& v) {
  const Eigen::Index n = v.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix vdv = v.adjoint() * v;
  lv += kron(v.conjugate(), v);
  lv -= 0.5 * kron(id, vdv);
  lv -= 0.5 * kron(vdv.transpose(), id);
}

void check_spec(const Architecture& arch, const LindbladSpec& spec) {
  if (spec.psi.size() != arch.inputs) {
    throw DimensionMismatch("input state has length " + std::to_string(spec.psi.size()) +
                            ", network has " + std::to_string(arch.inputs) + " input nodes");
  }
  if (spec.gamma_in < 0.0 || spec.gamma_out < 0.0 || spec.gamma_dephase < 0.0) {
    throw InvalidArgument("dissipation rates must be non-negative");
  }
  for (std::size_t k = 0; k < spec.output_sites.size(); ++k) {
    const int r = spec.output_sites[k];
    if (r < arch.first_output() || r >= arch.sites()) {
      throw InvalidArgument("output site " + std::to_string(r) + " is outside the output layer");
    }
    for (std::size_t m = 0; m < k; ++m) {
      if (spec.output_sites[m] == r) {
        throw InvalidArgument("output site " + std::to_string(r) + " listed twice");
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// NetworkTopology

NetworkTopology::NetworkTopology(const Architecture& arch, MaskPolicy policy, bool allow_onsite)
    : arch_(arch), allow_onsite_(allow_onsite) {
  check_architecture(arch);
  const int d = arch.sites();
  mask_.assign(static_cast<std::size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const Layer a = layer_of(arch, i);
      const Layer b = layer_of(arch, j);
      bool ok = false;
      if (policy == MaskPolicy::no_direct_io) {
        ok = !((a == Layer::input && b == Layer::output) || (a == Layer::output && b == Layer::input));
      } else {
        ok = (a == Layer::hidden) != (b == Layer::hidden);
      }
      mask_[static_cast<std::size_t>(i) * d + j] = ok ? 1 : 0;
    }
  }
  collect_free_entries();
}

NetworkTopology::NetworkTopology(const Architecture& arch, const std::vector<std::vector<bool>>& mask,
                                 bool allow_onsite)
    : arch_(arch), allow_onsite_(allow_onsite) {
  check_architecture(arch);
  const int d = arch.sites();
  if (static_cast<int>(mask.size()) != d) throw DimensionMismatch("mask row count != site count");
  mask_.assign(static_cast<std::size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(mask[i].size()) != d) throw DimensionMismatch("mask is not square");
    for (int j = 0; j < d; ++j) {
      if (mask[i][j] != mask[j][i]) throw InvalidArgument("mask must be symmetric");
      if (i != j) mask_[static_cast<std::size_t>(i) * d + j] = mask[i][j] ? 1 : 0;
    }
  }
  collect_free_entries();
}

bool NetworkTopology::allowed(int i, int j) const {
  const int d = sites();
  if (i < 0 || j < 0 || i >= d || j >= d) return false;
  if (i == j) return allow_onsite_;
  return mask_[static_cast<std::size_t>(i) * d + j] != 0;
}

void NetworkTopology::collect_free_entries() {
  free_.clear();
  const int d = sites();
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      if (allowed(i, j)) free_.emplace_back(i, j);
    }
  }
}

// ---------------------------------------------------------------------------
// Hamiltonian

Hamiltonian::Hamiltonian(NetworkTopology topology)
    : topology_(std::move(topology)), h_(RealMatrix::Zero(topology_.sites(), topology_.sites())) {}

Hamiltonian::Hamiltonian(NetworkTopology topology, RealMatrix h)
    : topology_(std::move(topology)), h_(std::move(h)) {
  if (h_.rows() != topology_.sites() || h_.cols() != topology_.sites()) {
    throw DimensionMismatch("hopping matrix does not match the topology");
  }
}

Hamiltonian Hamiltonian::random(const NetworkTopology& topology, double h_max, Rng& rng) {
  if (!(h_max > 0.0)) throw InvalidArgument("h_max must be positive");
  Hamiltonian out(topology);
  for (const auto& [i, j] : topology.free_entries()) out.set(i, j, uniform(rng, -h_max, h_max));
  return out;
}

void Hamiltonian::set(int i, int j, double value) {
  if (!topology_.allowed(i, j)) {
    throw InvalidArgument("entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is forbidden by the topology");
  }
  h_(i, j) = value;
  h_(j, i) = value;
}

void Hamiltonian::validate(double h_max) const {
  const int d = sites();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double v = h_(i, j);
      if (v != h_(j, i)) throw InvalidArgument("Hamiltonian is not symmetric");
      if (v != 0.0 && !topology_.allowed(i, j)) throw InvalidArgument("Hamiltonian violates the mask");
      if (std::abs(v) > h_max) throw InvalidArgument("hopping amplitude exceeds h_max");
    }
  }
}

// ---------------------------------------------------------------------------
// LindbladSpec / DensityMatrix

LindbladSpec LindbladSpec::for_architecture(const Architecture& arch, double gamma_in,
                                            double gamma_out, double gamma_dephase) {
  LindbladSpec spec;
  spec.psi = ComplexVector::Unit(arch.inputs, 0);
  spec.gamma_in = gamma_in;
  spec.gamma_out = gamma_out;
  spec.gamma_dephase = gamma_dephase;
  for (int r = 0; r < arch.outputs; ++r) spec.output_sites.push_back(arch.first_output() + r);
  return spec;
}

LindbladSpec LindbladSpec::with_input(const ComplexVector& input) const {
  LindbladSpec out = *this;
  out.psi = input;
  return out;
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Dense reference path

ComplexMatrix build_liouvillian(const Hamiltonian& h, const LindbladSpec& spec) {
  const Architecture& arch = h.topology().architecture();
  check_spec(arch, spec);
  const int d = arch.sites();
  const int n = d + 1;

  ComplexMatrix hf = ComplexMatrix::Zero(n, n);
  hf.bottomRightCorner(d, d) = h.matrix().cast<Complex>();

  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix lv = -i_unit * (kron(id, hf) - kron(hf.transpose(), id));

  if (spec.gamma_in > 0.0) {
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < arch.inputs; ++i) v(i + 1, 0) = spec.psi(i);
    add_dissipator(lv, std::sqrt(spec.gamma_in) * v);
  }
  if (spec.gamma_out > 0.0) {
    for (int r : spec.output_sites) {
      ComplexMatrix v = ComplexMatrix::Zero(n, n);
      v(0, r + 1) = std::sqrt(spec.gamma_out);
      add_dissipator(lv, v);
    }
  }
  if (spec.gamma_dephase > 0.0) {
    for (int j = 0; j < d; ++j) {
      ComplexMatrix v = ComplexMatrix::Zero(n, n);
      v(j + 1, j + 1) = std::sqrt(spec.gamma_dephase);
      add_dissipator(lv, v);
    }
  }
  return lv;
}

DensityMatrix steady_state(const ComplexMatrix& liouvillian, double tol) {
  const auto n2 = liouvillian.rows();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n2))));
  if (n * n != n2) throw DimensionMismatch("generator size is not a perfect square");

  const std::vector<ComplexVector> kernel = null_space(liouvillian, tol);
  if (kernel.empty()) throw NoSteadyState("generator has no kernel at the requested tolerance");
  if (kernel.size() > 1) {
    throw DegenerateSteadyState("steady-state space has dimension " + std::to_string(kernel.size()));
  }
  ComplexMatrix rho = unvectorize(kernel.front(), n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) throw NoSteadyState("kernel element is traceless");
  rho /= tr;
  return DensityMatrix(std::move(rho));
}

CurrentVector output_currents(const DensityMatrix& rho, const LindbladSpec& spec) {
  CurrentVector j(static_cast<Eigen::Index>(spec.output_sites.size()));
  for (std::size_t k = 0; k < spec.output_sites.size(); ++k) {
    const int r = spec.output_sites[k];
    if (r + 1 >= rho.dim()) throw DimensionMismatch("output site outside the density matrix");
    j(static_cast<Eigen::Index>(k)) = spec.gamma_out * rho.site_population(r);
  }
  return j;
}

double injection_current(const DensityMatrix& rho, const LindbladSpec& spec) {
  return spec.gamma_in * rho.vacuum_population();
}

CurrentVector currents_for_input(const Hamiltonian& h, const LindbladSpec& base_spec,
                                 const ComplexVector& psi) {
  const LindbladSpec spec = base_spec.with_input(psi);
  return output_currents(steady_state(build_liouvillian(h, spec)), spec);
}

// ---------------------------------------------------------------------------
// TransportSolver

namespace {

// Real coordinates of a d x d Hermitian matrix: d diagonals, then Re and Im of
// the strict upper triangle in row-major order.
struct HermitianCoords {
  int d;
  int pairs;
  explicit HermitianCoords(int dim) : d(dim), pairs(dim * (dim - 1) / 2) {}
  int size() const { return d * d; }
  int pair(int a, int b) const { return a * d - a * (a + 1) / 2 + (b - a - 1); }
  int re(int a, int b) const { return d + pair(a, b); }
  int im(int a, int b) const { return d + pairs + pair(a, b); }
};

}  // namespace

TransportSolver::TransportSolver(const Hamiltonian& h, const LindbladSpec& spec) {
  const Architecture& arch = h.topology().architecture();
  check_spec(arch, spec);
  const int d = arch.sites();
  const int q = static_cast<int>(spec.output_sites.size());
  inputs_ = arch.inputs;
  outputs_ = q;
  gamma_out_ = spec.gamma_out;

  const HermitianCoords c(d);
  const int n = c.size();
  RealVector loss = RealVector::Zero(d);
  for (int r : spec.output_sites) loss(r) = spec.gamma_out;
  const RealMatrix& hm = h.matrix();
  const double g_dep = spec.gamma_dephase;

  // S(Y) = -i(HY - YH) - 1/2 (G Y + Y G) - g_dep (Y - diag Y), applied to each basis element.
  RealMatrix s(n, n);
  ComplexMatrix basis = ComplexMatrix::Zero(d, d);
  ComplexMatrix image(d, d);
  const Complex i_unit(0.0, 1.0);
  auto apply_and_store = [&](int col) {
    image.noalias() = -i_unit * (hm * basis - basis * hm);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        Complex damp = -0.5 * (loss(a) + loss(b)) * basis(a, b);
        if (a != b) damp -= g_dep * basis(a, b);
        image(a, b) += damp;
      }
    }
    for (int a = 0; a < d; ++a) {
      s(a, col) = image(a, a).real();
      for (int b = a + 1; b < d; ++b) {
        s(c.re(a, b), col) = image(a, b).real();
        s(c.im(a, b), col) = image(a, b).imag();
      }
    }
  };
  for (int a = 0; a < d; ++a) {
    basis(a, a) = 1.0;
    apply_and_store(a);
    basis(a, a) = 0.0;
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      basis(a, b) = 1.0;
      basis(b, a) = 1.0;
      apply_and_store(c.re(a, b));
      basis(a, b) = i_unit;
      basis(b, a) = -i_unit;
      apply_and_store(c.im(a, b));
      basis(a, b) = 0.0;
      basis(b, a) = 0.0;
    }
  }

  Eigen::PartialPivLU<RealMatrix> lu(s.transpose());
  const double rcond = lu.rcond();
  if (!(rcond > kNullSpaceTolerance)) {
    dense_ = true;
    h_ = h;
    spec_ = spec;
    return;
  }

  RealMatrix rhs = RealMatrix::Zero(n, q + 1);
  for (int k = 0; k < q; ++k) rhs(spec.output_sites[static_cast<std::size_t>(k)], k) = 1.0;
  for (int a = 0; a < d; ++a) rhs(a, q) = 1.0;
  const RealMatrix w = lu.solve(rhs);

  const int l = inputs_;
  const HermitianCoords in(l);
  functionals_.resize(q + 1, l * l);
  for (int k = 0; k <= q; ++k) {
    for (int a = 0; a < l; ++a) {
      functionals_(k, a) = -spec.gamma_in * w(a, k);
      for (int b = a + 1; b < l; ++b) {
        functionals_(k, in.re(a, b)) = -spec.gamma_in * w(c.re(a, b), k);
        functionals_(k, in.im(a, b)) = -spec.gamma_in * w(c.im(a, b), k);
      }
    }
  }
}

namespace {

RealVector input_coords(const ComplexVector& psi) {
  const int l = static_cast<int>(psi.size());
  const HermitianCoords c(l);
  RealVector x(c.size());
  for (int a = 0; a < l; ++a) {
    x(a) = std::norm(psi(a));
    for (int b = a + 1; b < l; ++b) {
      const Complex z = psi(a) * std::conj(psi(b));
      x(c.re(a, b)) = z.real();
      x(c.im(a, b)) = z.imag();
    }
  }
  return x;
}

}  // namespace

CurrentVector TransportSolver::currents(const ComplexVector& psi) const {
  if (psi.size() != inputs_) throw DimensionMismatch("input length does not match the network");
  if (dense_) return currents_for_input(h_, spec_, psi);
  const RealVector values = functionals_ * input_coords(psi);
  const double vacuum = 1.0 / (1.0 + values(outputs_));
  return gamma_out_ * vacuum * values.head(outputs_);
}

void TransportSolver::currents(const RealMatrix& inputs, RealMatrix& out) const {
  if (inputs.cols() != inputs_) throw DimensionMismatch("input width does not match the network");
  if (dense_) {
    out.resize(inputs.rows(), outputs_);
    for (Eigen::Index row = 0; row < inputs.rows(); ++row) {
      out.row(row) = currents(ComplexVector(inputs.row(row).transpose().cast<Complex>())).transpose();
    }
    return;
  }
  const int l = inputs_;
  const HermitianCoords c(l);
  const Eigen::Index n = inputs.rows();
  RealMatrix coords = RealMatrix::Zero(n, c.size());
  for (Eigen::Index row = 0; row < n; ++row) {
    for (int a = 0; a < l; ++a) {
      coords(row, a) = inputs(row, a) * inputs(row, a);
      for (int b = a + 1; b < l; ++b) coords(row, c.re(a, b)) = inputs(row, a) * inputs(row, b);
    }
  }
  const RealMatrix values = coords * functionals_.transpose();
  out.resize(n, outputs_);
  for (Eigen::Index row = 0; row < n; ++row) {
    const double scale = gamma_out_ / (1.0 + values(row, outputs_));
    out.row(row) = scale * values.row(row).head(outputs_);
  }
}

double TransportSolver::vacuum_population(const ComplexVector& psi) const {
  if (psi.size() != inputs_) throw DimensionMismatch("input length does not match the network");
  if (dense_) return steady_state(build_liouvillian(h_, spec_.with_input(psi))).vacuum_population();
  const RealVector values = functionals_ * input_coords(psi);
  return 1.0 / (1.0 + values(outputs_));
}

}  // namespace qlu
