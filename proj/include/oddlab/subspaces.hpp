#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oddlab/lattice.hpp"

namespace oddlab {

// Admissible subspace at truncation: the image of a projection operator,
// together with its declared symbol identity.
//
// Two subspaces are comparable (relative index defined) when they carry the
// same non-empty symbol_id. Finite-rank modifications keep the symbol_id and
// record themselves in `provenance`, which is serialized into reports.
struct SpectralSubspace {
  ModeLattice ambient;
  LatticeOperator projection;  // square, idempotent to construction tol
  std::shared_ptr<const SymbolSample> symbol;  // projection-valued sample (optional)
  std::string symbol_id;
  std::vector<std::string> provenance;
  bool orthogonal = true;

  long rank() const;  // round(trace P); exact for comparably built projections
  std::string provenance_str() const;
};

// Span of the eigenvectors of a Hermitian A with eigenvalue >= -rank_tol*||A||.
// The declared symbol is the pointwise nonnegative spectral projection of A's
// symbol when that is available and invertible on the grid.
SpectralSubspace nonnegative_spectral_subspace(const LatticeOperator& A, double rank_tol,
                                               std::string symbol_id = {});

// Everything: projection Id. Comparable only to itself.
SpectralSubspace full_space(const ModeLattice& lattice, std::string symbol_id = "full");

// Enlarges L by exactly k orthonormal directions from its orthogonal
// complement. Deterministic: complement-projected coordinate vectors are
// scanned from the highest flat index downward and orthonormalized, so the
// truncated Hardy space extends by the mode closest to the retained block
// first. The symbol is unchanged (a finite modification); provenance records
// the extension.
SpectralSubspace finite_rank_extend(const SpectralSubspace& L, int k);

// Orthogonal complement Id - P. Requires an orthogonal projection (apply
// orthogonalize_metric first otherwise). For an odd symbol the complement
// symbol is the antipodal pullback; symbol ids gain/lose a "^perp" suffix so
// the operation is an involution.
SpectralSubspace complement(const SpectralSubspace& L);

// Image of L under an invertible operator: projection U P U^-1. The caller
// declares the symbol identity of the result (non-unitary U gives an oblique
// projection; orthogonality is detected, not assumed).
SpectralSubspace map_subspace(const LatticeOperator& U, const SpectralSubspace& L,
                              std::string declared_symbol_id);

bool symbols_comparable(const SpectralSubspace& a, const SpectralSubspace& b);

struct RelIndex {
  long value = 0;
  double residual = 0.0;  // distance of the trace difference from the integer
};

// Relative index of comparably truncated subspaces with equal symbols:
// round(trace P1 - trace P2), with the residual required below tol. Cross-
// checked against the rank route dim ker - dim coker of P2 restricted to
// Im P1 -> Im P2; a mismatch raises NumericError.
RelIndex relative_index(const SpectralSubspace& L1, const SpectralSubspace& L2, double tol);

struct SwapOperator {
  LatticeOperator op;        // the 2x2-block interchange operator
  double smin = 0.0;         // smallest singular value of the block operator
  double condition = 0.0;
  double transport_smin = 0.0;  // smallest singular value of QP + (1-Q)(1-P)
  double projection_gap = 0.0;  // ||P - Q||
  bool singular = false;
};

// The block operator
//   [ QP + (1-Q)(1-P)    (1-Q)P + Q(1-P) ]
//   [ Q(1-P) + (1-Q)P    QP + (1-Q)(1-P) ]
// on the doubled fiber. It carries Im P + Im(1-P) (as first/second summand)
// onto Im Q + Im(1-Q); the diagonal block governs the direct Im P -> Im Q
// transport and its smallest singular value is reported, reaching 0 at the
// ||P - Q|| = 1 boundary.
SwapOperator swap_operator(const LatticeOperator& P, const LatticeOperator& Q);

// Direct sum of `copies` copies of L (fiber rank multiplied).
SpectralSubspace power_direct_sum(const SpectralSubspace& L, int copies);

}  // namespace oddlab
