#pragma once

#include <string>
#include <vector>

#include "oddlab/dyadic.hpp"
#include "oddlab/subspaces.hpp"

namespace oddlab {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending, with multiplicity
  int kernel_dim = 0;               // eigenvalues with |lambda| <= threshold
  double threshold = 0.0;
};

struct EigH {
  Spectrum spectrum;
  CMatrix basis;  // orthonormal eigenvectors, columns matching `eigenvalues`
};

// Full Hermitian eigendecomposition; rejects operators with
// ||A - A*|| > 1e-10 max(1, ||A||).
EigH eig_hermitian(const LatticeOperator& A, double threshold);

// Spectral asymmetry at truncation. Nonzero eigenvalues are greedily paired
// lambda <-> -lambda within pair_tol * ||A||; the value is
//   kernel/2 + (sum of signs of unpaired eigenvalues)/2.
// Every truncated spectrum has finite asymmetry, so `exact` is the normal
// outcome; ambiguous pairings (several candidates in tolerance) are resolved
// nearest-first and counted.
struct EtaResult {
  double value = 0.0;
  double kernel_contribution = 0.0;  // kernel_count / 2
  double asymmetry_sum = 0.0;        // sum of sgn(lambda) over unpaired
  long symmetric_pairs = 0;
  std::vector<double> unpaired;
  bool exact = true;
  int ambiguous_pairs = 0;
  // integer data for exact dyadic reconstruction
  int kernel_count = 0;
  long unpaired_sign_sum = 0;

  Dyadic exact_value() const { return Dyadic(kernel_count + unpaired_sign_sum, 1); }
};

EtaResult eta_invariant(const LatticeOperator& A, double pair_tol);

// (Id + A|A|^-1)/2 for Hermitian invertible A, evaluated through the Newton
// iteration for the matrix sign function. Deliberately avoids the eigenbasis,
// which is the independent route it is compared against.
LatticeOperator positive_projection_formula(const LatticeOperator& A, double tol);

// A = Delta^(1/4) (2P - 1) Delta^(1/4) for an orthogonal projection P and a
// positive Delta (optionally regularized by reg*Id). The nonnegative spectral
// subspace of the result has relative index 0 against Im P.
LatticeOperator build_A_from_projection(const LatticeOperator& P, const LatticeOperator& Delta,
                                        double reg = 0.0);

// The self-adjoint block operator [[0, D*], [D, 0]] on the doubled fiber. Its
// spectrum is the symmetric set of +/- singular values of D and its kernel is
// ker D + ker D*.
LatticeOperator hamiltonian_from_D(const LatticeOperator& D);

enum class DRoute { Eta, RelativeIndex };

struct DimensionResult {
  Dyadic value;
  DRoute route = DRoute::Eta;
  std::string witness;
};

// Dimension of the nonnegative spectral subspace of a Hermitian operator with
// odd principal symbol, through the spectral asymmetry. Requires the declared
// symbol to pass the odd parity check and the admissibility report's checked
// parts to be clean.
DimensionResult d_via_eta(const LatticeOperator& A, const AdmissibilityReport& admissibility,
                          double pair_tol, double sym_tol = 1e-10);

// Dimension through the relative index: with an invertible even U whose action
// carries 2^N L onto a subspace with the symbol of the complement,
//   d = ind(U 2^N L, (2^N L)^perp) / 2^(N+1).
// The caller supplies U (witnesses are not canonical) and may supply the
// complement explicitly when L's projection is not orthogonal.
DimensionResult d_via_relative_index(const SpectralSubspace& L, const LatticeOperator& U, int N,
                                     double tol, const SpectralSubspace* declared_complement = nullptr,
                                     double sym_tol = 1e-10);

// Transport of a known dimension along the relative-dimension property:
// d(L) = d(base) + ind(L, base) for equal-symbol subspaces.
DimensionResult d_via_chain(const DimensionResult& base_d, const SpectralSubspace& L,
                            const SpectralSubspace& base, double tol);

}  // namespace oddlab
