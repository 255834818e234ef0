#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "oddlab/linalg.hpp"
#include "oddlab/symbol.hpp"

namespace oddlab {

// Truncated Fourier lattice for sections of a rank-r bundle over S^1 (dim 1)
// or T^2 (dim 2). Modes k have every component in [-K, K].
//
// Index layout (normative, so matrix dumps compare across implementations):
// modes are enumerated lexicographically over components, k1 outer and k2
// inner, each running -K..K; the fiber index varies fastest. A coefficient
// vector is indexed by flat(mode_index, fiber) = mode_index * r + fiber.
struct ModeLattice {
  int dim = 1;
  int K = 0;
  int r = 1;

  ModeLattice() = default;
  ModeLattice(int dim_, int K_, int r_);

  int modes_per_axis() const { return 2 * K + 1; }
  int mode_count() const;
  int size() const { return r * mode_count(); }

  std::array<int, 2> mode(int mode_idx) const;
  int mode_index(const std::array<int, 2>& k) const;
  int flat(int mode_idx, int fiber) const { return mode_idx * r + fiber; }

  friend bool operator==(const ModeLattice& a, const ModeLattice& b) {
    return a.dim == b.dim && a.K == b.K && a.r == b.r;
  }
  friend bool operator!=(const ModeLattice& a, const ModeLattice& b) { return !(a == b); }
  std::string str() const;
};

// Fourier coefficients of a section of E.
struct Section {
  ModeLattice lattice;
  CVector coefficients;
};

// The section e^{ik.x} tensor e_fiber.
Section pure_mode(const ModeLattice& lattice, const std::array<int, 2>& k, int fiber);

// Dense operator between truncated lattices.
//
// `bandwidth` is the maximum mode-coupling distance (infinity norm over mode
// components); 0 means block-diagonal over modes. Entries that couple modes
// within `bandwidth` of the truncation boundary see the sharp cutoff and are
// untrusted; mode_is_interior / interior_flat_indices expose the trusted set.
struct LatticeOperator {
  ModeLattice domain;    // input lattice
  ModeLattice codomain;  // output lattice
  CMatrix entries;       // codomain.size() x domain.size()
  int order = 0;
  int bandwidth = 0;
  Parity parity = Parity::None;
  std::shared_ptr<const SymbolSample> symbol;  // declared principal symbol (optional)
  std::string label;                           // provenance tag for reports

  bool square() const { return domain == codomain; }
};

using MultiplierFn = std::function<CMatrix(const std::array<int, 2>& k)>;

// Fourier multiplier op: block-diagonal, applying to the pure mode
// e^{ik.x} (x) v gives a(k) v exactly. Every a(k) must be r x r.
LatticeOperator assemble_multiplier(const ModeLattice& lattice, const MultiplierFn& a, int order,
                                    Parity parity = Parity::None,
                                    std::shared_ptr<const SymbolSample> symbol = nullptr,
                                    std::string label = {});
LatticeOperator assemble_multiplier_serial(const ModeLattice& lattice, const MultiplierFn& a,
                                           int order);

// Finite trigonometric polynomial sum_h c_h e^{i h.x} with scalar coefficients.
struct TrigPoly {
  std::vector<std::pair<std::array<int, 2>, cplx>> harmonics;
  int degree() const;  // max |h_i| over stored harmonics

  static TrigPoly constant(cplx c) { return TrigPoly{{{{0, 0}, c}}}; }
  static TrigPoly exponential(const std::array<int, 2>& h, cplx c = 1.0) { return TrigPoly{{{h, c}}}; }
  static TrigPoly cosine(const std::array<int, 2>& h);  // cos(h.x)
};

struct VarCoeffTerm {
  TrigPoly coeff;
  MultiplierFn multiplier;  // b(k), r x r
};

// Operator sum_t c_t(x) b_t(D): convolution by the coefficient harmonics
// composed with the multiplier part. Bandwidth is the largest harmonic degree;
// a coefficient harmonic exceeding K is not representable and is rejected.
LatticeOperator assemble_variable_coeff(const ModeLattice& lattice,
                                        const std::vector<VarCoeffTerm>& terms, int order = 0,
                                        Parity parity = Parity::None,
                                        std::shared_ptr<const SymbolSample> symbol = nullptr,
                                        std::string label = {});
LatticeOperator assemble_variable_coeff_serial(const ModeLattice& lattice,
                                               const std::vector<VarCoeffTerm>& terms, int order = 0);

// Operator algebra. compose(a, b) applies b first; orders and bandwidths add,
// and declared symbols multiply pointwise when both operands carry them on the
// same grid. adjoint preserves order, bandwidth and parity. direct_sum glues
// two operators over the same mode lattice into one of summed fiber rank,
// fiberwise block-diagonal. apply is the matrix-vector action on a section.
LatticeOperator compose(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator adjoint(const LatticeOperator& a);
LatticeOperator direct_sum(const LatticeOperator& a, const LatticeOperator& b);
Section apply(const LatticeOperator& a, const Section& u);

// Fiberwise 2x2 block operator [[a11, a12], [a21, a22]] over a shared mode
// lattice; empty blocks (zero-size entries) are treated as zero.
LatticeOperator block2(const LatticeOperator* a11, const LatticeOperator* a12,
                       const LatticeOperator* a21, const LatticeOperator* a22);

LatticeOperator identity_operator(const ModeLattice& lattice);
LatticeOperator zero_operator(const ModeLattice& domain, const ModeLattice& codomain);

// Rectangular selector (u, v) -> v from the fiber-concatenated lattice E + F
// onto F.
LatticeOperator second_summand_selector(const ModeLattice& latticeE, const ModeLattice& latticeF);

// For a multiplier a(k): the multiplier a(-k) (the operator whose symbol is
// the antipodal pullback of the original's).
LatticeOperator alpha_conjugate_multiplier(const LatticeOperator& op);

// Blockwise polar phase of a multiplier: each a(k) = U S V* becomes
// U 1_{S > tol} V*, so kernel and cokernel dimensions are preserved while the
// symbol becomes the unitary sigma/|sigma|.
LatticeOperator multiplier_polar_phase(const LatticeOperator& op, double rank_tol);

// dim ker via singular values below rank_tol * sigma_max. The zero operator
// has full kernel (returns the domain dimension); that is the documented
// convention, not an error.
int kernel_dim(const LatticeOperator& op, double rank_tol);

// Margin validity. A mode is interior for a given band when every component
// sits at least `band` away from the truncation boundary.
bool mode_is_interior(const ModeLattice& lattice, int mode_idx, int band);
std::vector<int> interior_flat_indices(const ModeLattice& lattice, int band);
// Fraction of |v|^2 carried by non-interior (margin) modes.
double margin_mass(const ModeLattice& lattice, const CVector& v, int band);

// Matrix dump: UTF-8 CSV, header "# lattice dim=<d> K=<K> r=<r>", one row per
// matrix row, entries "re+imi" with 17 significant digits.
void write_csv(const LatticeOperator& op, std::ostream& os);
struct CsvMatrix {
  int dim = 1, K = 0, r = 1;
  CMatrix entries;
};
CsvMatrix read_csv(std::istream& is);

// Admissibility at truncation: the parity pattern of the homogeneous symbol
// terms is checkable only for the declared principal symbol and, when the
// operator is a pure multiplier, for the multiplier function itself
// (a(-k) = (-1)^order a(k) away from k = 0). Anything else is reported as
// unchecked rather than guessed.
struct AdmissibilityReport {
  bool principal_checked = false;
  bool principal_ok = false;
  double principal_residual = 0.0;
  bool multiplier_checked = false;
  bool multiplier_ok = false;
  double multiplier_residual = 0.0;
  std::string unchecked;

  bool checked_parts_ok() const {
    return (!principal_checked || principal_ok) && (!multiplier_checked || multiplier_ok);
  }
};
AdmissibilityReport check_admissibility(const LatticeOperator& op, double tol);

}  // namespace oddlab
