#pragma once

#include "oddlab/subspaces.hpp"

namespace oddlab {

// Pauli matrices, 1-indexed; pauli(3) is the diagonal one.
CMatrix pauli(int i);

// Shared sample grids: S^1 with 256 base points (fine enough for the winding
// oracle), T^2 with the default 8 codirections.
std::shared_ptr<const CosphereGrid> default_grid(int dim);

// Named symbols.
SymbolSample pauli_symbol(std::shared_ptr<const CosphereGrid> grid);  // xi1 s1 + xi2 s2
SymbolSample hardy_symbol(std::shared_ptr<const CosphereGrid> grid);  // 1 at xi=+1, 0 at xi=-1

// Named operators. All carry declared symbols, parity tags and labels.
LatticeOperator momentum_s1(int K);                    // a(k) = k  (-i d/dphi)
LatticeOperator laplacian_s1(int K, double shift = 1); // a(k) = k^2 + shift
LatticeOperator shift_s1(int K, int n);                // convolution by e^{inx}
LatticeOperator dirac_t2(int K);                       // a(k) = k1 s1 + k2 s2
LatticeOperator dbar_t2(int K, cplx shift = 0.0);      // a(k) = k1 + i k2 + shift
LatticeOperator clifford_dirac_t2(int K, int N);       // a(k) = cl(k) on the 2^N fiber
LatticeOperator constant_fiber_multiplier(const ModeLattice& lattice, const CMatrix& c,
                                          std::string label = {});

// Named subspaces.
SpectralSubspace hardy_space(int K);                     // modes k >= 0 on S^1
SpectralSubspace hardy_space_from(int K, int lowest_mode);  // modes k >= lowest_mode
SpectralSubspace halfspace_t2(int K);  // scalar odd projection onto the upper half-lattice

// Scalar multiplier expressions over the mode variables: "k" on S^1,
// "k1"/"k2" on T^2, the imaginary unit "i", integer/decimal literals, + - * /,
// integer powers with ^, parentheses. Examples: "k1+i*k2", "k^2+1".
MultiplierFn parse_multiplier_expr(const std::string& expr, int dim);

// Spec-string dispatchers used by the experiment configs:
//   operators: "dirac" | "momentum" | "dbar" | "laplacian" | "shift:<n>" |
//              "clifford:<N>" | "multiplier:<expr>"
//   subspaces: "hardy" | "dirac:L+" | "halfspace"
LatticeOperator operator_from_spec(const std::string& spec, const std::string& manifold, int K);
SpectralSubspace subspace_from_spec(const std::string& spec, const std::string& manifold, int K,
                                    double rank_tol);

}  // namespace oddlab
