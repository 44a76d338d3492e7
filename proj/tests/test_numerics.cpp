#include <cmath>
#include <numbers>

#include "doctest.h"
#include "errors.hpp"
#include "network.hpp"
#include "numerics.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace qlu;

namespace {

ComplexMatrix random_complex(Eigen::Index n, Rng& rng) {
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  }
  return m;
}

// Superoperator of -i[H, .] in the column-stacking convention, built directly.
ComplexMatrix commutator_superoperator(const ComplexMatrix& h) {
  const auto n = h.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(k % n, k / n) = 1.0;
    const ComplexMatrix image = Complex(0, -1) * (h * e - e * h);
    out.col(k) = vectorize(image);
  }
  return out;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("kernel of the zero map is the whole space") {
    const auto basis = null_space(ComplexMatrix::Zero(2, 2));
    CHECK(basis.size() == 2);
  }

  TEST_CASE("identity has an empty kernel") { CHECK(null_space(ComplexMatrix::Identity(3, 3)).empty()); }

  TEST_CASE("rank-one 2x2 kernel is (1,-1)/sqrt2 up to phase") {
    ComplexMatrix a(2, 2);
    a << 1, 1, 1, 1;
    const auto basis = null_space(a);
    REQUIRE(basis.size() == 1);
    const ComplexVector v = basis[0];
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    CHECK(std::abs(v(0) + v(1)) < 1e-12);
    CHECK(std::abs(std::abs(v(0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  }

  TEST_CASE("kernel vectors are orthonormal and satisfy the residual bound") {
    Rng rng = substream(11, "test");
    for (int trial = 0; trial < 20; ++trial) {
      // rank-deficient product of random factors
      const Eigen::Index n = 6, rank = 3 + trial % 3;
      ComplexMatrix left = random_complex(n, rng).leftCols(rank);
      ComplexMatrix right = random_complex(n, rng).topRows(rank);
      const ComplexMatrix a = left * right;
      const auto basis = null_space(a);
      REQUIRE(static_cast<Eigen::Index>(basis.size()) == n - rank);
      const double norm = spectral_norm(a);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK((a * basis[i]).norm() <= 1e-10 * norm);
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const Complex dot = basis[i].dot(basis[j]);
          CHECK(std::abs(dot - Complex(i == j ? 1.0 : 0.0)) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("null_space rejects bad input") {
    CHECK_THROWS_AS(null_space(ComplexMatrix::Zero(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(null_space(ComplexMatrix::Zero(2, 2), 0.0), InvalidArgument);
  }

  TEST_CASE("vec(A B C) = (C^T kron A) vec(B)") {
    Rng rng = substream(3, "test");
    const ComplexMatrix a = random_complex(3, rng), b = random_complex(3, rng), c = random_complex(3, rng);
    ComplexMatrix kron(9, 9);
    const ComplexMatrix ct = c.transpose();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) kron.block(3 * i, 3 * j, 3, 3) = ct(i, j) * a;
    }
    CHECK((vectorize(a * b * c) - kron * vectorize(b)).norm() < 1e-12);
    CHECK((unvectorize(vectorize(b), 3) - b).norm() == 0.0);
  }

  TEST_CASE("hermiticity checks") {
    ComplexMatrix h(2, 2);
    h << 1, Complex(0, 1), Complex(0, -1), 2;
    CHECK(is_hermitian(h));
    h(0, 1) += 1e-6;
    CHECK_FALSE(is_hermitian(h));
    CHECK(hermiticity_defect(h) == doctest::Approx(1e-6));
  }

  TEST_CASE("zero generator leaves the state unchanged") {
    ComplexMatrix rho(2, 2);
    rho << 0.25, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.75;
    const ComplexMatrix out = integrate_master_equation(ComplexMatrix::Zero(4, 4), rho, 10.0, 0.01);
    CHECK((out - rho).norm() == 0.0);
  }

  TEST_CASE("Rabi oscillation transfers the population at t = pi/(2h)") {
    const double hop = 0.7;
    ComplexMatrix h(2, 2);
    h << 0, hop, hop, 0;
    ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    const ComplexMatrix l = commutator_superoperator(h);
    const ComplexMatrix out =
        integrate_master_equation(l, rho0, std::numbers::pi / (2 * hop), default_time_step(l));
    CHECK(std::abs(out(1, 1).real() - 1.0) < 1e-6);
    CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-9);
  }

  TEST_CASE("repeated squaring matches step-by-step RK4") {
    Rng rng = substream(5, "test");
    NetworkTopology top(Architecture{2, 1, 2});
    const Hamiltonian h = Hamiltonian::random(top, 2.0, rng);
    LindbladSpec spec = LindbladSpec::for_architecture(top.architecture(), 1.0, 1.0, 0.3);
    spec.psi = ComplexVector::Ones(2) / std::sqrt(2.0);
    const ComplexMatrix l = build_liouvillian(h, spec);
    ComplexMatrix rho0 = ComplexMatrix::Zero(6, 6);
    rho0(0, 0) = 1.0;
    const double dt = default_time_step(l);
    const ComplexMatrix fast = integrate_master_equation(l, rho0, 3.0, dt);
    const auto g = oracle::network_generator(h.matrix(), spec.psi, spec.output_sites, 1.0, 1.0, 0.3);
    const ComplexMatrix slow = oracle::rk4(g, rho0, 3.0, dt);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("integration preserves trace and hermiticity; long time reaches the kernel") {
    Rng rng = substream(8, "test");
    for (int trial = 0; trial < 5; ++trial) {
      NetworkTopology top(Architecture{1, 1, 2});
      const Hamiltonian h = Hamiltonian::random(top, 1.0, rng);
      LindbladSpec spec = LindbladSpec::for_architecture(top.architecture(), 1.0, 1.0, 0.5);
      const ComplexMatrix l = build_liouvillian(h, spec);
      ComplexMatrix rho0 = ComplexMatrix::Zero(5, 5);
      rho0(0, 0) = 1.0;
      const double dt = default_time_step(l);
      const ComplexMatrix mid = integrate_master_equation(l, rho0, 2.0, dt);
      CHECK(std::abs(mid.trace() - Complex(1.0)) < 1e-9 * 2.0);
      CHECK(hermiticity_defect(mid) < 1e-9);
      const ComplexMatrix late = integrate_master_equation(l, rho0, 1000.0, dt);
      const DensityMatrix ss = steady_state(l);
      CHECK((late - ss.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("integrator rejects mismatched shapes") {
    CHECK_THROWS_AS(integrate_master_equation(ComplexMatrix::Zero(9, 9), ComplexMatrix::Identity(2, 2), 1.0, 0.1),
                    DimensionMismatch);
    CHECK_THROWS_AS(integrate_master_equation(ComplexMatrix::Zero(4, 4), ComplexMatrix::Identity(2, 2), 1.0, 0.0),
                    InvalidArgument);
  }
}
