#include "oddlab/linalg.hpp"

#include <cmath>

#include "oddlab/errors.hpp"

namespace oddlab {

double opnorm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double hermiticity_residual(const CMatrix& m) { return opnorm(m - m.adjoint()); }

CMatrix range_basis(const CMatrix& projection) {
  Eigen::BDCSVD<CMatrix> svd(projection, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 0.5) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix kernel_basis(const CMatrix& m, double rel_tol) {
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) >= rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

double max_principal_angle(const CMatrix& basis_a, const CMatrix& basis_b) {
  if (basis_a.cols() != basis_b.cols())
    throw ContractError("max_principal_angle: span dimensions differ");
  if (basis_a.cols() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(basis_a.adjoint() * basis_b);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin > 1.0) smin = 1.0;
  if (smin < -1.0) smin = -1.0;
  return std::acos(smin);
}

CMatrix hermitian_power(const CMatrix& a, double exponent, double floor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((a + a.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericError("hermitian_power: eigensolver failed");
  Eigen::VectorXd lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) <= floor) throw ContractError("hermitian_power: eigenvalue not above required floor");
    lam(i) = std::pow(lam(i), exponent);
  }
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix matrix_sign_newton(const CMatrix& a, double tol, int max_iter) {
  const double scale = opnorm(a);
  if (scale == 0.0) throw ContractError("matrix_sign_newton: zero matrix");
  CMatrix x = a / scale;
  const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
  for (int it = 0; it < max_iter; ++it) {
    Eigen::PartialPivLU<CMatrix> lu(x);
    const CMatrix xinv = lu.solve(id);
    x = (x + xinv) / 2.0;
    if ((x * x - id).norm() < tol * static_cast<double>(a.rows())) return x;
  }
  throw NumericError("matrix_sign_newton: no convergence (matrix near-singular?)");
}

CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      // Irwin-Hall(4) centered: light-tailed, mean 0, deterministic.
      double re = 0.0, im = 0.0;
      for (int t = 0; t < 4; ++t) {
        re += rand_unit(rng);
        im += rand_unit(rng);
      }
      m(i, j) = cplx(re - 2.0, im - 2.0);
    }
  return m;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  const CMatrix m = random_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_well_conditioned(int n, std::mt19937_64& rng, double cond_cap) {
  const CMatrix u = random_unitary(n, rng);
  const CMatrix v = random_unitary(n, rng);
  const double hi = std::sqrt(cond_cap), lo = 1.0 / hi;
  Eigen::VectorXd sv(n);
  for (int i = 0; i < n; ++i) sv(i) = lo + (hi - lo) * rand_unit(rng);
  return u * sv.asDiagonal() * v.adjoint();
}

}  // namespace oddlab
