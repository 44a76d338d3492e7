#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qlu {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Relative singular-value cutoff used to decide the numerical kernel.
inline constexpr double kNullSpaceTolerance = 1e-10;

/// Orthonormal basis of the numerical kernel of a square matrix.
///
/// Singular values below `tol * sigma_max` are treated as zero, so every
/// returned vector satisfies ||A v|| <= tol * ||A||_2 (up to rounding).
/// A zero matrix has the whole space as kernel.
std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol = kNullSpaceTolerance);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);

/// Column-stacking vectorization, vec(A B C) = (C^T kron A) vec(B).
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);
double hermiticity_defect(const ComplexMatrix& a);

/// Step used by the time-integration oracle: 0.01 / ||L||.
double default_time_step(const ComplexMatrix& liouvillian);

/// Propagate d vec(rho)/dt = L vec(rho) to t_final with fixed-step classic RK4.
///
/// One RK4 step is the linear map R = I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24,
/// so n steps are R^n applied to vec(rho0). The power is taken by repeated
/// squaring; the result is the same trajectory point as stepping n times.
/// The step is shrunk so that n * h == t_final exactly.
ComplexMatrix integrate_master_equation(const ComplexMatrix& liouvillian, const ComplexMatrix& rho0,
                                        double t_final, double dt);

}  // namespace qlu
