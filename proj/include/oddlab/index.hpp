#pragma once

#include <string>
#include <vector>

#include "oddlab/spectral.hpp"

namespace oddlab {

struct NamedResidual {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool ok() const { return value <= tol; }
};

// Side-by-side record of one index identity. `pass` requires the left side to
// equal the exact-rational right side exactly and every residual to sit below
// its declared tolerance.
struct IndexReport {
  std::string name;
  long lhs = 0;
  std::vector<std::pair<std::string, Dyadic>> rhs_terms;
  Dyadic rhs_total;
  std::vector<NamedResidual> residuals;
  bool pass = false;
  std::string provenance;

  void finalize();  // computes rhs_total and pass from the recorded parts
};

// Fredholm data of the compression P2 D P1 : Im P1 -> Im P2.
//
// Kernel and cokernel are counted by singular-value thresholding of the
// compressed matrix; the cokernel comes from the adjoint compression so the
// thresholds are symmetric. Null vectors whose mass is concentrated on modes
// within the operator's bandwidth of the truncation boundary are cutoff
// artifacts (the sharp truncation manufactures them) and are discarded from
// the counts; the report keeps the discarded totals.
struct CompressionIndex {
  long index = 0;
  int kernel_dim = 0;
  int cokernel_dim = 0;
  int margin_kernel_discarded = 0;
  int margin_cokernel_discarded = 0;
  double invariance_residual = 0.0;  // ||(1-P2) D P1|| / ||D||
  double symbol_min_sv = -1.0;       // min singular value of the symbol restriction; -1 if unknown
  CMatrix kernel_basis;              // ambient coordinates of the kept kernel vectors
};

// Requires D L1 within L2 (relative residual <= 1e-8); reports the symbol
// restriction's smallest singular value when all declared symbols are present.
CompressionIndex fredholm_index_in_subspaces(const LatticeOperator& D, const SpectralSubspace& L1,
                                             const SpectralSubspace& L2, double rank_tol);

// dim ker D - dim ker D* by singular-value thresholding; exact on the
// multiplier corpus and used as the analytic oracle for ind of full-space
// operators.
long analytic_index(const LatticeOperator& D, double rank_tol);

// Total phase increment / 2pi of a nonvanishing loop of samples (ordered
// around S^1, wrap-around included). Rejects near-vanishing samples and phase
// steps too close to pi to be trusted.
long winding_number(const std::vector<cplx>& loop, double nonvanishing_tol);

// ind(D, L1, L2) = ind(sigma(D)|_L + 1_{L^perp}) + ind(L1, L2) for equal-symbol
// subspaces. The left side is the compression index of P2 D P1; the symbol term
// comes from the winding oracle on S^1 (sign convention: index = -winding,
// pinned by the shift compression on the Hardy space) and is accepted on T^2
// only when the restricted symbol is constant (term 0).
IndexReport toeplitz_formula_check(const LatticeOperator& D, const SpectralSubspace& L1,
                                   const SpectralSubspace& L2, double rank_tol);

// ind(D, L1, L2) = ind(D_tilde)/2 + d(L1) - d(L2) for odd subspaces on an
// even-dimensional manifold, with sigma(D_tilde) = sigma(D) + alpha* sigma(D).
// D_tilde is supplied (its declared symbol is checked against that pattern
// when available) and its index comes from the analytic oracle.
IndexReport subspace_index_formula_check(const LatticeOperator& D, const SpectralSubspace& L1,
                                         const SpectralSubspace& L2, const LatticeOperator& D_tilde,
                                         const DimensionResult& d1, const DimensionResult& d2,
                                         double rank_tol, std::string name = "subspace-index");

// ind(D, L, full) = ind(D_tilde)/2 + d(L): the operator maps a subspace onto
// the whole section space.
IndexReport subspace_to_space_index_check(const LatticeOperator& D, const SpectralSubspace& L,
                                          const LatticeOperator& D_tilde, const DimensionResult& dL,
                                          double rank_tol, std::string name = "subspace-to-space");

// For an even operator D on T^2 and an odd subspace L:
//   ind(sigma(D)|_L + 1_{L^perp}) = ind(D)/2,
// the left side realized as the full-space operator P D P + (1 - P) and both
// sides computed by the analytic oracle.
IndexReport half_index_check(const LatticeOperator& D_even, const SpectralSubspace& L,
                             double rank_tol, std::string name = "half-index");

// End-to-end verification of the worked pipeline: from D build
// A = [[0, D*], [D, 0]], the subspace L+(A) and the projection P0 onto the
// second summand, then check
//   ker P0 = ker D + 0  (principal angle),  coker P0 = 0,
//   ind(P0, L+(A), full) = dim ker D,
//   eta(A) = -ind(D)/2 + dim ker D  (exactly, as dyadic rationals),
//   ind(P0~)/2 + eta(A) = dim ker D  with ind(P0~) = ind(D) as the oracle.
IndexReport hamiltonian_selector_verify(const LatticeOperator& D, double rank_tol,
                                        double angle_tol = 1e-8);

}  // namespace oddlab
