#include "oddlab/subspaces.hpp"

#include <algorithm>
#include <cmath>

#include "oddlab/errors.hpp"

namespace oddlab {

long SpectralSubspace::rank() const { return std::lround(projection.entries.trace().real()); }

std::string SpectralSubspace::provenance_str() const {
  std::string out = symbol_id;
  for (const auto& step : provenance) out += " <- " + step;
  return out;
}

namespace {

void require_idempotent(const LatticeOperator& P, double tol, const char* who) {
  if (!P.square()) throw ContractError(std::string(who) + ": projection must be square");
  const double res = opnorm(P.entries * P.entries - P.entries);
  if (res > tol)
    throw ContractError(std::string(who) + ": not idempotent (residual " + std::to_string(res) + ")");
}

}  // namespace

SpectralSubspace nonnegative_spectral_subspace(const LatticeOperator& A, double rank_tol,
                                               std::string symbol_id) {
  if (rank_tol <= 0.0) throw ContractError("nonnegative_spectral_subspace: rank_tol must be positive");
  if (!A.square()) throw ContractError("nonnegative_spectral_subspace: operator must be square");
  const double scale = opnorm(A.entries);
  if (hermiticity_residual(A.entries) > 1e-10 * std::max(1.0, scale))
    throw ContractError("nonnegative_spectral_subspace: operator is not Hermitian");

  Eigen::SelfAdjointEigenSolver<CMatrix> es((A.entries + A.entries.adjoint()) / 2.0);
  const auto& lam = es.eigenvalues();
  CMatrix P = CMatrix::Zero(A.entries.rows(), A.entries.cols());
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) >= -rank_tol * scale) P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();

  SpectralSubspace L;
  L.ambient = A.domain;
  L.projection.domain = L.projection.codomain = A.domain;
  L.projection.entries = std::move(P);
  L.projection.order = 0;
  L.projection.bandwidth = A.bandwidth == 0 ? 0 : A.domain.K;  // eigenprojection of a banded
                                                               // operator is not banded; be honest
  L.orthogonal = true;
  L.symbol_id = symbol_id.empty() ? (A.label.empty() ? "L+(A)" : "L+(" + A.label + ")") : std::move(symbol_id);
  L.provenance.push_back("nonnegative-spectral-subspace of " + (A.label.empty() ? "A" : A.label));
  if (A.symbol && A.symbol->rows() == A.symbol->cols()) {
    try {
      L.symbol = std::make_shared<SymbolSample>(positive_symbol_projection(*A.symbol, 1e-10));
      L.projection.symbol = L.symbol;
    } catch (const NumericError&) {
      L.provenance.push_back("symbol projection unavailable (degenerate symbol)");
    }
  }
  return L;
}

SpectralSubspace full_space(const ModeLattice& lattice, std::string symbol_id) {
  SpectralSubspace L;
  L.ambient = lattice;
  L.projection = identity_operator(lattice);
  L.orthogonal = true;
  L.symbol_id = std::move(symbol_id);
  L.provenance.push_back("full space on " + lattice.str());
  return L;
}

SpectralSubspace finite_rank_extend(const SpectralSubspace& L, int k) {
  if (k < 0) throw ContractError("finite_rank_extend: k must be nonnegative");
  if (!L.orthogonal) throw ContractError("finite_rank_extend: subspace must be orthogonal");
  if (k == 0) return L;
  require_idempotent(L.projection, 1e-8, "finite_rank_extend");

  const int n = L.ambient.size();
  const CMatrix Q = CMatrix::Identity(n, n) - L.projection.entries;
  const long capacity = n - L.rank();
  if (k > capacity)
    throw ContractError("finite_rank_extend: k=" + std::to_string(k) +
                        " exceeds complement dimension " + std::to_string(capacity));

  // Deterministic complement directions: orthonormalize Q e_j scanning j from
  // the highest flat index down.
  std::vector<CVector> picked;
  picked.reserve(k);
  for (int j = n - 1; j >= 0 && static_cast<int>(picked.size()) < k; --j) {
    CVector w = Q.col(j);
    for (const auto& u : picked) w -= u.dot(w) * u;
    const double norm = w.norm();
    if (norm > 1e-8) picked.push_back(w / norm);
  }
  if (static_cast<int>(picked.size()) < k)
    throw NumericError("finite_rank_extend: could not span the requested complement directions");

  SpectralSubspace out = L;
  for (const auto& u : picked) out.projection.entries += u * u.adjoint();
  out.provenance.push_back("finite-modification-of:" + L.symbol_id + "(+" + std::to_string(k) + ")");
  return out;
}

SpectralSubspace complement(const SpectralSubspace& L) {
  if (!L.orthogonal)
    throw ContractError("complement: projection is not orthogonal; orthogonalize first");
  SpectralSubspace out;
  out.ambient = L.ambient;
  out.projection = L.projection;
  out.projection.entries = CMatrix::Identity(L.ambient.size(), L.ambient.size()) - L.projection.entries;
  out.orthogonal = true;
  if (L.symbol) {
    if (odd_projection_check(*L.symbol, 1e-8).ok) {
      out.symbol = std::make_shared<SymbolSample>(pullback_alpha(*L.symbol));
    } else {
      auto s = std::make_shared<SymbolSample>(*L.symbol);
      const CMatrix id = CMatrix::Identity(L.symbol->rows(), L.symbol->cols());
      for (auto& v : s->values) v = id - v;
      out.symbol = std::move(s);
    }
    out.projection.symbol = out.symbol;
  }
  constexpr const char* kSuffix = "^perp";
  if (L.symbol_id.size() > 5 && L.symbol_id.ends_with(kSuffix))
    out.symbol_id = L.symbol_id.substr(0, L.symbol_id.size() - 5);
  else
    out.symbol_id = L.symbol_id + kSuffix;
  out.provenance = L.provenance;
  out.provenance.push_back("complement of " + L.symbol_id);
  return out;
}

SpectralSubspace map_subspace(const LatticeOperator& U, const SpectralSubspace& L,
                              std::string declared_symbol_id) {
  if (U.domain != L.ambient || U.codomain != L.ambient)
    throw ContractError("map_subspace: operator does not act on the ambient lattice");
  Eigen::PartialPivLU<CMatrix> lu(U.entries);
  const CMatrix Uinv = lu.solve(CMatrix::Identity(U.entries.rows(), U.entries.cols()));
  const double inv_residual =
      (U.entries * Uinv - CMatrix::Identity(U.entries.rows(), U.entries.cols())).norm();
  if (!(inv_residual <= 1e-8))  // NaN-safe
    throw ContractError("map_subspace: operator is not invertible");
  SpectralSubspace out;
  out.ambient = L.ambient;
  out.projection = L.projection;
  out.projection.entries = U.entries * L.projection.entries * Uinv;
  out.projection.symbol = nullptr;
  out.orthogonal = hermiticity_residual(out.projection.entries) <= 1e-10;
  out.symbol_id = std::move(declared_symbol_id);
  out.provenance = L.provenance;
  out.provenance.push_back("image under " + (U.label.empty() ? std::string("U") : U.label));
  return out;
}

bool symbols_comparable(const SpectralSubspace& a, const SpectralSubspace& b) {
  return !a.symbol_id.empty() && a.symbol_id == b.symbol_id;
}

RelIndex relative_index(const SpectralSubspace& L1, const SpectralSubspace& L2, double tol) {
  if (tol <= 0.0) throw ContractError("relative_index: tol must be positive");
  if (L1.ambient != L2.ambient) throw ContractError("relative_index: ambient lattices differ");
  if (!symbols_comparable(L1, L2))
    throw ContractError("relative_index: subspaces do not have equal declared symbols ('" +
                        L1.symbol_id + "' vs '" + L2.symbol_id + "')");

  const double t = (L1.projection.entries.trace() - L2.projection.entries.trace()).real();
  const long value = std::lround(t);
  const double residual = std::abs(t - static_cast<double>(value));
  if (residual > tol)
    throw NumericError("relative_index: subspaces not comparably truncated (trace defect " +
                       std::to_string(residual) + ")");

  // Independent rank oracle: index of P2 : Im P1 -> Im P2.
  const CMatrix B1 = range_basis(L1.projection.entries);
  const CMatrix B2 = range_basis(L2.projection.entries);
  const CMatrix C = B2.adjoint() * (L2.projection.entries * B1);
  Eigen::BDCSVD<CMatrix> svd(C);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) >= 1e-8 * smax) ++rank;
  const long oracle = (C.cols() - rank) - (C.rows() - rank);
  if (oracle != value)
    throw NumericError("relative_index: trace route (" + std::to_string(value) +
                       ") and rank route (" + std::to_string(oracle) + ") disagree");
  return {value, residual};
}

SwapOperator swap_operator(const LatticeOperator& P, const LatticeOperator& Q) {
  if (P.domain != Q.domain || P.codomain != Q.codomain || !P.square())
    throw ContractError("swap_operator: projections must be square on the same ambient lattice");
  require_idempotent(P, 1e-10, "swap_operator");
  require_idempotent(Q, 1e-10, "swap_operator");

  const int n = P.domain.size();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix& p = P.entries;
  const CMatrix& q = Q.entries;
  const CMatrix diag = q * p + (id - q) * (id - p);
  const CMatrix off = (id - q) * p + q * (id - p);

  LatticeOperator dblk;
  dblk.domain = dblk.codomain = ModeLattice(P.domain.dim, P.domain.K, 2 * P.domain.r);
  dblk.entries = CMatrix::Zero(2 * n, 2 * n);
  // fiber-interleaved 2x2 block layout, consistent with block2/direct_sum
  const int M = P.domain.mode_count(), r = P.domain.r;
  for (int mo = 0; mo < M; ++mo)
    for (int mi = 0; mi < M; ++mi) {
      dblk.entries.block(mo * 2 * r, mi * 2 * r, r, r) = diag.block(mo * r, mi * r, r, r);
      dblk.entries.block(mo * 2 * r, mi * 2 * r + r, r, r) = off.block(mo * r, mi * r, r, r);
      dblk.entries.block(mo * 2 * r + r, mi * 2 * r, r, r) = off.block(mo * r, mi * r, r, r);
      dblk.entries.block(mo * 2 * r + r, mi * 2 * r + r, r, r) = diag.block(mo * r, mi * r, r, r);
    }
  dblk.bandwidth = std::max(P.bandwidth, Q.bandwidth) * 2;
  dblk.parity = Parity::Even;
  dblk.label = "swap(" + P.label + "," + Q.label + ")";

  SwapOperator out;
  out.op = std::move(dblk);
  Eigen::BDCSVD<CMatrix> svd(out.op.entries);
  const auto& sv = svd.singularValues();
  out.smin = sv(sv.size() - 1);
  out.condition = out.smin > 0.0 ? sv(0) / out.smin : std::numeric_limits<double>::infinity();
  Eigen::BDCSVD<CMatrix> svd_diag(diag);
  out.transport_smin = svd_diag.singularValues()(svd_diag.singularValues().size() - 1);
  out.projection_gap = opnorm(p - q);
  out.singular = out.smin < 1e-12 * std::max(1.0, sv(0)) || out.transport_smin < 1e-12;
  if (out.projection_gap < 1.0 - 1e-9 && out.singular)
    throw NumericError("swap_operator: singular despite ||P-Q|| < 1");
  return out;
}

SpectralSubspace power_direct_sum(const SpectralSubspace& L, int copies) {
  if (copies < 1) throw ContractError("power_direct_sum: need at least one copy");
  SpectralSubspace out = L;
  for (int c = 1; c < copies; ++c) {
    out.projection = direct_sum(out.projection, L.projection);
    out.ambient = out.projection.domain;
  }
  if (copies > 1) {
    out.symbol = out.projection.symbol;
    out.symbol_id = std::to_string(copies) + "x" + L.symbol_id;
    out.provenance.push_back("direct sum of " + std::to_string(copies) + " copies");
  }
  return out;
}

}  // namespace oddlab
