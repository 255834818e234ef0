#include "oddlab/index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oddlab/errors.hpp"

namespace oddlab {

void IndexReport::finalize() {
  rhs_total = Dyadic();
  for (const auto& [name_, term] : rhs_terms) rhs_total = rhs_total + term;
  bool ok = rhs_total == static_cast<std::int64_t>(lhs);
  for (const auto& r : residuals) ok = ok && r.ok();
  pass = ok;
}

namespace {

struct ThresholdedSvd {
  Eigen::BDCSVD<CMatrix> svd;
  int rank = 0;
  explicit ThresholdedSvd(const CMatrix& m, double rank_tol)
      : svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV) {
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    for (int i = 0; i < sv.size(); ++i)
      if (smax > 0.0 && sv(i) >= rank_tol * smax) ++rank;
  }
};

}  // namespace

CompressionIndex fredholm_index_in_subspaces(const LatticeOperator& D, const SpectralSubspace& L1,
                                             const SpectralSubspace& L2, double rank_tol) {
  if (rank_tol <= 0.0) throw ContractError("fredholm_index_in_subspaces: rank_tol must be positive");
  if (D.domain != L1.ambient || D.codomain != L2.ambient)
    throw ContractError("fredholm_index_in_subspaces: operator does not map L1's ambient to L2's");

  CompressionIndex out;
  const double dnorm = std::max(1e-300, opnorm(D.entries));
  const CMatrix P2 = L2.projection.entries;
  const CMatrix leak =
      (CMatrix::Identity(P2.rows(), P2.cols()) - P2) * (D.entries * L1.projection.entries);
  out.invariance_residual = opnorm(leak) / dnorm;
  if (out.invariance_residual > 1e-8)
    throw ContractError("fredholm_index_in_subspaces: D does not map L1 into L2 (relative leak " +
                        std::to_string(out.invariance_residual) + ")");

  const CMatrix B1 = range_basis(L1.projection.entries);
  const CMatrix B2 = range_basis(L2.projection.entries);
  const CMatrix C = B2.adjoint() * (D.entries * B1);

  ThresholdedSvd tsvd(C, rank_tol);
  const int n_ker = static_cast<int>(C.cols()) - tsvd.rank;
  const int n_coker = static_cast<int>(C.rows()) - tsvd.rank;

  // Cutoff-artifact classification: a null vector supported mostly on modes
  // the band structure cannot trust did not exist before truncation.
  const int band = D.bandwidth + L1.projection.bandwidth + L2.projection.bandwidth;
  std::vector<int> kept_kernel;
  for (int i = 0; i < n_ker; ++i) {
    const CVector w = B1 * tsvd.svd.matrixV().col(tsvd.rank + i);
    if (band > 0 && margin_mass(L1.ambient, w, band) > 0.5)
      ++out.margin_kernel_discarded;
    else
      kept_kernel.push_back(tsvd.rank + i);
  }
  for (int i = 0; i < n_coker; ++i) {
    const CVector w = B2 * tsvd.svd.matrixU().col(tsvd.rank + i);
    if (band > 0 && margin_mass(L2.ambient, w, band) > 0.5) ++out.margin_cokernel_discarded;
  }
  out.kernel_dim = n_ker - out.margin_kernel_discarded;
  out.cokernel_dim = n_coker - out.margin_cokernel_discarded;
  out.index = out.kernel_dim - out.cokernel_dim;
  out.kernel_basis.resize(L1.ambient.size(), static_cast<Eigen::Index>(kept_kernel.size()));
  for (size_t i = 0; i < kept_kernel.size(); ++i)
    out.kernel_basis.col(static_cast<Eigen::Index>(i)) = B1 * tsvd.svd.matrixV().col(kept_kernel[i]);

  // Ellipticity diagnostic: smallest singular value of the symbol restriction
  // sigma(D) : L1 -> L2 over the grid, when all three symbols are declared.
  if (D.symbol && L1.symbol && L2.symbol && D.symbol->grid == L1.symbol->grid &&
      D.symbol->grid == L2.symbol->grid) {
    double min_sv = std::numeric_limits<double>::infinity();
    const auto& grid = *D.symbol->grid;
    for (int b = 0; b < grid.base_count(); ++b)
      for (int c = 0; c < grid.codirection_count(); ++c) {
        const CMatrix b1 = range_basis(L1.symbol->at(b, c));
        const CMatrix b2 = range_basis(L2.symbol->at(b, c));
        if (b1.cols() == 0 || b2.cols() == 0) continue;
        Eigen::BDCSVD<CMatrix> s(b2.adjoint() * (D.symbol->at(b, c) * b1));
        min_sv = std::min(min_sv, s.singularValues()(s.singularValues().size() - 1));
      }
    out.symbol_min_sv = std::isfinite(min_sv) ? min_sv : -1.0;
  }
  return out;
}

long analytic_index(const LatticeOperator& D, double rank_tol) {
  return kernel_dim(D, rank_tol) - kernel_dim(adjoint(D), rank_tol);
}

long winding_number(const std::vector<cplx>& loop, double nonvanishing_tol) {
  if (nonvanishing_tol <= 0.0) throw ContractError("winding_number: tolerance must be positive");
  if (loop.size() < 8) throw NumericError("winding_number: loop has too few samples");
  double total = 0.0;
  for (size_t j = 0; j < loop.size(); ++j) {
    const cplx a = loop[j];
    const cplx b = loop[(j + 1) % loop.size()];
    if (std::abs(a) <= nonvanishing_tol || std::abs(b) <= nonvanishing_tol)
      throw NumericError("winding_number: sample too close to zero");
    const double step = std::arg(b / a);
    if (std::abs(step) > 0.9 * std::numbers::pi)
      throw NumericError("winding_number: phase step too large; grid too coarse for this loop");
    total += step;
  }
  const double w = total / (2.0 * std::numbers::pi);
  const long rounded = std::lround(w);
  if (std::abs(w - static_cast<double>(rounded)) > 1e-6)
    throw NumericError("winding_number: total phase is not an integer multiple of 2pi");
  return rounded;
}

namespace {

// Winding oracle for the symbol term on S^1: the determinant of the symbol
// restricted to the subbundle at xi = +1, followed around the base circle.
long symbol_restriction_winding(const LatticeOperator& D, const SpectralSubspace& L1,
                                const SpectralSubspace& L2) {
  if (!D.symbol || !L1.symbol || !L2.symbol)
    throw ConfigError("toeplitz_formula_check: symbol term needs declared symbols on D and both subspaces");
  const auto& grid = *D.symbol->grid;
  if (L1.symbol->grid != D.symbol->grid || L2.symbol->grid != D.symbol->grid)
    throw ConfigError("toeplitz_formula_check: symbols sampled on different grids");
  std::vector<cplx> loop;
  loop.reserve(grid.base_count());
  for (int b = 0; b < grid.base_count(); ++b) {
    const CMatrix b1 = range_basis(L1.symbol->at(b, 0));
    const CMatrix b2 = range_basis(L2.symbol->at(b, 0));
    if (b1.cols() != b2.cols())
      throw ConfigError("toeplitz_formula_check: restricted symbol is not square");
    if (b1.cols() == 0) {
      loop.push_back(1.0);  // empty restriction: determinant of the empty map
      continue;
    }
    loop.push_back((b2.adjoint() * (D.symbol->at(b, 0) * b1)).determinant());
  }
  return winding_number(loop, 1e-9);
}

// On T^2 there is no general topological oracle here; only instances whose
// restricted symbol is constant over the grid (index term 0) are accepted.
void require_constant_symbol_restriction(const LatticeOperator& D, const SpectralSubspace& L1) {
  if (!D.symbol || !L1.symbol || D.symbol->grid != L1.symbol->grid)
    throw ConfigError("toeplitz_formula_check: no topological oracle for this torus instance");
  const auto& grid = *D.symbol->grid;
  const CMatrix ref = D.symbol->at(0, 0);
  for (int b = 0; b < grid.base_count(); ++b)
    for (int c = 0; c < grid.codirection_count(); ++c)
      if (opnorm(D.symbol->at(b, c) - ref) > 1e-9)
        throw ConfigError(
            "toeplitz_formula_check: torus symbol term unknown (restricted symbol not constant)");
}

}  // namespace

IndexReport toeplitz_formula_check(const LatticeOperator& D, const SpectralSubspace& L1,
                                   const SpectralSubspace& L2, double rank_tol) {
  if (!symbols_comparable(L1, L2))
    throw ContractError("toeplitz_formula_check: subspaces must carry equal declared symbols");

  // The operator acting in the subspaces is the compression P2 D P1.
  const LatticeOperator T = compose(L2.projection, compose(D, L1.projection));
  const auto lhs = fredholm_index_in_subspaces(T, L1, L2, rank_tol);

  long symbol_term = 0;
  if (D.domain.dim == 1)
    symbol_term = -symbol_restriction_winding(D, L1, L2);
  else
    require_constant_symbol_restriction(D, L1);

  const RelIndex rel = relative_index(L1, L2, 1e-6);

  IndexReport rep;
  rep.name = "toeplitz";
  rep.lhs = lhs.index;
  rep.rhs_terms = {{"symbol_index", Dyadic::integer(symbol_term)},
                   {"relative_index", Dyadic::integer(rel.value)}};
  rep.residuals.push_back({"invariance", lhs.invariance_residual, 1e-8});
  rep.residuals.push_back({"relative_index_trace_defect", rel.residual, 1e-6});
  rep.provenance = "D=" + (D.label.empty() ? std::string("?") : D.label) + "; L1=" +
                   L1.provenance_str() + "; L2=" + L2.provenance_str();
  rep.finalize();
  return rep;
}

IndexReport subspace_index_formula_check(const LatticeOperator& D, const SpectralSubspace& L1,
                                         const SpectralSubspace& L2, const LatticeOperator& D_tilde,
                                         const DimensionResult& d1, const DimensionResult& d2,
                                         double rank_tol, std::string name) {
  if (D.domain.dim != 2)
    throw ContractError("subspace_index_formula_check: the identity lives on the even-dimensional case");
  IndexReport rep;
  rep.name = std::move(name);

  double parity_residual = 0.0;
  if (L1.symbol) {
    const auto pc = odd_projection_check(*L1.symbol, 1e-8);
    if (!pc.ok) throw ContractError("subspace_index_formula_check: L1 symbol is not an odd projection");
    parity_residual = std::max({parity_residual, pc.idempotency_residual, pc.oddness_residual});
  }
  if (L2.symbol) {
    const auto pc = odd_projection_check(*L2.symbol, 1e-8);
    if (!pc.ok) throw ContractError("subspace_index_formula_check: L2 symbol is not an odd projection");
    parity_residual = std::max({parity_residual, pc.idempotency_residual, pc.oddness_residual});
  }

  // Consistency of the supplied doubled operator: its declared symbol must be
  // sigma(D) + alpha* sigma(D).
  double dtilde_residual = 0.0;
  if (D_tilde.symbol && D.symbol && D_tilde.symbol->grid == D.symbol->grid) {
    const SymbolSample alpha_sigma = pullback_alpha(*D.symbol);
    const auto& grid = *D.symbol->grid;
    const int r_out = D.symbol->rows(), r_in = D.symbol->cols();
    for (int b = 0; b < grid.base_count(); ++b)
      for (int c = 0; c < grid.codirection_count(); ++c) {
        CMatrix expected = CMatrix::Zero(2 * r_out, 2 * r_in);
        expected.topLeftCorner(r_out, r_in) = D.symbol->at(b, c);
        expected.bottomRightCorner(r_out, r_in) = alpha_sigma.at(b, c);
        dtilde_residual = std::max(dtilde_residual, opnorm(D_tilde.symbol->at(b, c) - expected));
      }
  }

  const auto lhs = fredholm_index_in_subspaces(D, L1, L2, rank_tol);
  const long ind_tilde = analytic_index(D_tilde, rank_tol);

  rep.lhs = lhs.index;
  rep.rhs_terms = {{"half_ind_Dtilde", Dyadic(ind_tilde, 1)},
                   {"d_L1", d1.value},
                   {"minus_d_L2", -d2.value}};
  rep.residuals.push_back({"invariance", lhs.invariance_residual, 1e-8});
  rep.residuals.push_back({"odd_projection", parity_residual, 1e-8});
  rep.residuals.push_back({"Dtilde_symbol_consistency", dtilde_residual, 1e-8});
  rep.provenance = "D=" + D.label + "; Dtilde=" + D_tilde.label + "; L1=" + L1.provenance_str() +
                   "; L2=" + L2.provenance_str() + "; d1: " + d1.witness + "; d2: " + d2.witness;
  rep.finalize();
  return rep;
}

IndexReport subspace_to_space_index_check(const LatticeOperator& D, const SpectralSubspace& L,
                                          const LatticeOperator& D_tilde, const DimensionResult& dL,
                                          double rank_tol, std::string name) {
  IndexReport rep;
  rep.name = std::move(name);
  const SpectralSubspace full = full_space(D.codomain);
  const auto lhs = fredholm_index_in_subspaces(D, L, full, rank_tol);
  const long ind_tilde = analytic_index(D_tilde, rank_tol);
  rep.lhs = lhs.index;
  rep.rhs_terms = {{"half_ind_Dtilde", Dyadic(ind_tilde, 1)}, {"d_L", dL.value}};
  rep.residuals.push_back({"invariance", lhs.invariance_residual, 1e-8});
  rep.provenance = "D=" + D.label + "; Dtilde=" + D_tilde.label + "; L=" + L.provenance_str() +
                   "; d: " + dL.witness;
  rep.finalize();
  return rep;
}

IndexReport half_index_check(const LatticeOperator& D_even, const SpectralSubspace& L,
                             double rank_tol, std::string name) {
  if (D_even.domain.dim != 2) throw ContractError("half_index_check: requires the torus");
  bool even_ok = D_even.parity == Parity::Even;
  if (!even_ok && D_even.symbol) even_ok = parity_check(*D_even.symbol, Parity::Even, 1e-10).ok;
  if (!even_ok) throw ContractError("half_index_check: operator symbol is not even");
  if (L.symbol && !odd_projection_check(*L.symbol, 1e-8).ok)
    throw ContractError("half_index_check: subspace symbol is not an odd projection");

  // Realize sigma(D)|_L + 1_{L^perp} as the full-space operator P D P + (1-P).
  const CMatrix& P = L.projection.entries;
  LatticeOperator restricted = D_even;
  restricted.entries =
      P * D_even.entries * P + (CMatrix::Identity(P.rows(), P.cols()) - P);
  restricted.bandwidth = D_even.bandwidth + 2 * L.projection.bandwidth;
  restricted.label = "restrict(" + D_even.label + ")";

  IndexReport rep;
  rep.name = std::move(name);
  rep.lhs = analytic_index(restricted, rank_tol);
  rep.rhs_terms = {{"half_ind_D", Dyadic(analytic_index(D_even, rank_tol), 1)}};
  rep.provenance = "D=" + D_even.label + "; L=" + L.provenance_str();
  rep.finalize();
  return rep;
}

IndexReport hamiltonian_selector_verify(const LatticeOperator& D, double rank_tol,
                                        double angle_tol) {
  if (D.domain.dim != D.codomain.dim || D.domain.K != D.codomain.K)
    throw ContractError("hamiltonian_selector_verify: D must act between equal mode lattices");

  const LatticeOperator A = hamiltonian_from_D(D);
  const SpectralSubspace Lplus = nonnegative_spectral_subspace(A, rank_tol, "L+(" + A.label + ")");

  // Selector of the second summand: (u, v) -> v.
  const int rE = D.domain.r, rF = D.codomain.r;
  const LatticeOperator P0 = second_summand_selector(D.domain, D.codomain);

  const SpectralSubspace full = full_space(P0.codomain);
  const auto comp = fredholm_index_in_subspaces(P0, Lplus, full, rank_tol);

  // Oracle data straight from D.
  const int dim_ker_D = kernel_dim(D, rank_tol);
  const long ind_D = analytic_index(D, rank_tol);

  // ker P0 should be ker D + 0 inside the doubled space.
  const CMatrix kerD = kernel_basis(D.entries, rank_tol);
  double angle = 0.0;
  if (kerD.cols() > 0 || comp.kernel_basis.cols() > 0) {
    CMatrix embedded = CMatrix::Zero(A.domain.size(), kerD.cols());
    for (int m = 0; m < D.domain.mode_count(); ++m)
      embedded.middleRows(m * (rE + rF), rE) = kerD.middleRows(m * rE, rE);
    if (embedded.cols() != comp.kernel_basis.cols())
      angle = std::numbers::pi / 2;  // dimension mismatch: report the worst angle
    else if (embedded.cols() > 0)
      angle = max_principal_angle(embedded, comp.kernel_basis);
  }

  const EtaResult eta = eta_invariant(A, 1e-9);
  const Dyadic eta_dyadic = eta.exact_value();
  const Dyadic eta_predicted = Dyadic(-ind_D, 1) + Dyadic::integer(dim_ker_D);

  IndexReport rep;
  rep.name = "hamiltonian-selector";
  rep.lhs = comp.index;
  rep.rhs_terms = {{"half_ind_P0_tilde", Dyadic(ind_D, 1)}, {"eta", eta_dyadic}};
  rep.residuals.push_back({"kernel_angle", angle, angle_tol});
  rep.residuals.push_back({"invariance", comp.invariance_residual, 1e-8});
  rep.residuals.push_back(
      {"cokernel", static_cast<double>(comp.cokernel_dim), 0.0});  // coker P0 must vanish
  rep.residuals.push_back(
      {"ind_equals_dim_ker_D", std::abs(static_cast<double>(comp.index - dim_ker_D)), 0.0});
  rep.residuals.push_back(
      {"eta_spectral_identity",
       std::abs((eta_dyadic - eta_predicted).to_double()), 0.0});
  rep.provenance = "D=" + (D.label.empty() ? std::string("?") : D.label) +
                   "; A=" + A.label + "; L=" + Lplus.provenance_str();
  rep.finalize();
  return rep;
}

}  // namespace oddlab
