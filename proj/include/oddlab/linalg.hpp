#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace oddlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Operator (spectral) norm: largest singular value.
double opnorm(const CMatrix& m);

// ||m - m*||, operator norm.
double hermiticity_residual(const CMatrix& m);

// Orthonormal basis of the column space of a projection matrix (orthogonal or
// oblique): left singular vectors with singular value above 0.5.
CMatrix range_basis(const CMatrix& projection);

// Orthonormal basis of ker(m), singular values below rel_tol * sigma_max.
CMatrix kernel_basis(const CMatrix& m, double rel_tol);

// Largest principal angle (radians) between the column spans of two
// orthonormal-basis matrices. Throws if the spans have different dimensions.
double max_principal_angle(const CMatrix& basis_a, const CMatrix& basis_b);

// Hermitian fractional power via eigendecomposition; requires eigenvalues
// strictly above `floor`.
CMatrix hermitian_power(const CMatrix& a, double exponent, double floor);

// Matrix sign function of a Hermitian invertible matrix by the scaled Newton
// iteration X <- (X + X^-1)/2. Independent of any eigendecomposition, which is
// the point: the spectral-projection identity is checked against a separate
// eigenbasis route.
CMatrix matrix_sign_newton(const CMatrix& a, double tol = 1e-14, int max_iter = 100);

// Deterministic uniform double in [0,1) from a seeded engine. Avoids the
// implementation-defined std::uniform_real_distribution mapping so seeded runs
// reproduce bit-for-bit.
inline double rand_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Complex Gaussian-ish entries from rand_unit (sum of uniforms, centered).
CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng);

// Random unitary (QR of a random matrix, phase-fixed so it is deterministic).
CMatrix random_unitary(int n, std::mt19937_64& rng);

// Random invertible matrix with condition number below `cond_cap` (singular
// values resampled into [1/sqrt(cap), sqrt(cap)]).
CMatrix random_well_conditioned(int n, std::mt19937_64& rng, double cond_cap);

}  // namespace oddlab
