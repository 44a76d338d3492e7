#include "numerics.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "errors.hpp"

namespace qlu {

std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("null_space: matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected square");
  }
  if (!(tol > 0.0)) throw InvalidArgument("null_space: tolerance must be positive");

  const Eigen::Index n = a.rows();
  std::vector<ComplexVector> basis;
  if (n == 0) return basis;

  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double sigma_max = sigma(0);
  const ComplexMatrix& v = svd.matrixV();

  if (sigma_max == 0.0) {
    for (Eigen::Index k = 0; k < n; ++k) basis.push_back(ComplexVector::Unit(n, k));
    return basis;
  }
  // singular values are sorted in decreasing order
  for (Eigen::Index k = n - 1; k >= 0 && sigma(k) <= tol * sigma_max; --k) {
    basis.push_back(v.col(k));
  }
  return basis;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw DimensionMismatch("unvectorize: length is not dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermiticity_defect(a) <= tol; }

double default_time_step(const ComplexMatrix& liouvillian) {
  const double norm = spectral_norm(liouvillian);
  return norm > 0.0 ? 0.01 / norm : 0.01;
}

ComplexMatrix integrate_master_equation(const ComplexMatrix& liouvillian, const ComplexMatrix& rho0,
                                        double t_final, double dt) {
  const Eigen::Index dim = rho0.rows();
  if (rho0.rows() != rho0.cols()) throw DimensionMismatch("integrate_master_equation: rho0 not square");
  if (liouvillian.rows() != dim * dim || liouvillian.cols() != dim * dim) {
    throw DimensionMismatch("integrate_master_equation: generator is " +
                            std::to_string(liouvillian.rows()) + "x" +
                            std::to_string(liouvillian.cols()) + ", state needs " +
                            std::to_string(dim * dim));
  }
  if (!(dt > 0.0)) throw InvalidArgument("integrate_master_equation: dt must be positive");
  if (t_final < 0.0) throw InvalidArgument("integrate_master_equation: negative t_final");
  if (t_final == 0.0) return rho0;

  const auto steps = static_cast<unsigned long long>(std::ceil(t_final / dt));
  const double h = t_final / static_cast<double>(steps);
  const Eigen::Index n = dim * dim;

  const ComplexMatrix hl = h * liouvillian;
  const ComplexMatrix hl2 = hl * hl;
  const ComplexMatrix hl3 = hl2 * hl;
  ComplexMatrix step = ComplexMatrix::Identity(n, n) + hl + hl2 / 2.0 + hl3 / 6.0 + (hl3 * hl) / 24.0;

  ComplexVector state = vectorize(rho0);
  for (unsigned long long remaining = steps; remaining > 0; remaining >>= 1) {
    if (remaining & 1ULL) state = step * state;
    if (remaining > 1) step = step * step;
  }
  return unvectorize(state, dim);
}

}  // namespace qlu
