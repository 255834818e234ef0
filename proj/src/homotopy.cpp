#include "oddlab/homotopy.hpp"

#include <algorithm>
#include <cmath>

#include "oddlab/errors.hpp"

namespace oddlab {

double ProjectionPath::smoothness() const {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < projections.size(); ++i)
    worst = std::max(worst, opnorm(projections[i + 1].entries - projections[i].entries));
  return worst;
}

void ProjectionPath::validate(double idem_tol) const {
  if (projections.size() < 2 || projections.size() != times.size())
    throw ContractError("ProjectionPath: need at least two samples with matching times");
  for (const auto& P : projections) {
    if (!P.square() || P.domain != projections.front().domain)
      throw ContractError("ProjectionPath: samples live on different lattices");
    const double res = opnorm(P.entries * P.entries - P.entries);
    if (res > idem_tol)
      throw ContractError("ProjectionPath: sample not idempotent (residual " + std::to_string(res) +
                          ")");
  }
  const double s = smoothness();
  if (s >= 1.0)
    throw ContractError("ProjectionPath: rank jump along the path (step of norm " +
                        std::to_string(s) + " >= 1)");
}

ProjectionPath ProjectionPath::uniform(std::vector<LatticeOperator> samples) {
  ProjectionPath path;
  path.projections = std::move(samples);
  const size_t S = path.projections.size();
  path.times.resize(S);
  for (size_t i = 0; i < S; ++i) path.times[i] = S > 1 ? static_cast<double>(i) / (S - 1) : 0.0;
  return path;
}

namespace {

// Local polynomial reconstruction of the sampled path: P and dP/dt at any t
// come from the Lagrange polynomial through the nearest `window` samples
// (classical central differences at sample points, one-sided near the
// endpoints). A 7-point window keeps the reconstruction error far below the
// integrator's own, which the transport tolerances require.
struct PathInterpolant {
  const ProjectionPath& path;
  int window;

  explicit PathInterpolant(const ProjectionPath& p)
      : path(p), window(std::min<int>(7, static_cast<int>(p.projections.size()))) {}

  // value and slope of the local interpolant at t
  std::pair<CMatrix, CMatrix> eval(double t) const {
    const int S = static_cast<int>(path.projections.size());
    const double h = 1.0 / static_cast<double>(S - 1);
    int start = static_cast<int>(std::lround(t / h)) - window / 2;
    start = std::clamp(start, 0, S - window);

    // Lagrange basis values and derivatives at t over the window nodes
    std::array<double, 7> value_c{}, slope_c{};
    for (int j = 0; j < window; ++j) {
      const double xj = (start + j) * h;
      double lj = 1.0;
      for (int m = 0; m < window; ++m) {
        if (m == j) continue;
        lj *= (t - (start + m) * h) / (xj - (start + m) * h);
      }
      value_c[j] = lj;
      double dj = 0.0;
      for (int n = 0; n < window; ++n) {
        if (n == j) continue;
        double term = 1.0 / (xj - (start + n) * h);
        for (int m = 0; m < window; ++m) {
          if (m == j || m == n) continue;
          term *= (t - (start + m) * h) / (xj - (start + m) * h);
        }
        dj += term;
      }
      slope_c[j] = dj;
    }

    const auto& first = path.projections[start].entries;
    CMatrix p = CMatrix::Zero(first.rows(), first.cols());
    CMatrix pdot = CMatrix::Zero(first.rows(), first.cols());
    for (int j = 0; j < window; ++j) {
      p += value_c[j] * path.projections[start + j].entries;
      pdot += slope_c[j] * path.projections[start + j].entries;
    }
    return {std::move(p), std::move(pdot)};
  }
};

CMatrix polar_unitary(const CMatrix& m) {
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

TransportResult transport_projection_path(const ProjectionPath& path, int steps, bool reunitarize) {
  path.validate();
  if (steps < static_cast<int>(path.projections.size()))
    throw ContractError("transport_projection_path: steps must be at least the sample count");

  const PathInterpolant interp(path);
  const int n = path.projections.front().domain.size();
  CMatrix U = CMatrix::Identity(n, n);
  const double h = 1.0 / static_cast<double>(steps);

  auto generator = [&](double t, const CMatrix& u) -> CMatrix {
    const auto [p, pdot] = interp.eval(t);
    return (pdot * p - p * pdot) * u;
  };

  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const CMatrix k1 = generator(t, U);
    const CMatrix k2 = generator(t + h / 2, U + (h / 2) * k1);
    const CMatrix k3 = generator(t + h / 2, U + (h / 2) * k2);
    const CMatrix k4 = generator(t + h, U + h * k3);
    U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (reunitarize && (s + 1) % 10 == 0) U = polar_unitary(U);
    if (!U.allFinite()) throw NumericError("transport_projection_path: integration blew up");
  }

  TransportResult out;
  out.U = path.projections.front();
  out.U.entries = U;
  out.U.bandwidth = path.projections.front().domain.K;  // ODE mixes all trusted structure
  out.U.parity = Parity::None;
  out.U.symbol = nullptr;
  out.U.label = "transport";
  const CMatrix& P0 = path.projections.front().entries;
  const CMatrix& P1 = path.projections.back().entries;
  out.range_residual = opnorm((CMatrix::Identity(n, n) - P1) * (U * P0));
  out.unitarity_drift = opnorm(U.adjoint() * U - CMatrix::Identity(n, n));
  Eigen::BDCSVD<CMatrix> svd(U);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin < 1e-12) throw NumericError("transport_projection_path: transport became singular");
  out.condition = svd.singularValues()(0) / smin;
  return out;
}

LatticeOperator rotation_homotopy(const LatticeOperator& U, double phi) {
  if (!U.square()) throw ContractError("rotation_homotopy: U must be square");
  const int n = U.domain.size();
  Eigen::PartialPivLU<CMatrix> lu(U.entries);
  const CMatrix Uinv = lu.solve(CMatrix::Identity(n, n));
  const double inv_residual = (U.entries * Uinv - CMatrix::Identity(n, n)).norm();
  if (!(inv_residual <= 1e-8 * std::max(1.0, U.entries.norm())))  // NaN-safe
    throw ContractError("rotation_homotopy: U is not invertible");

  const double c = std::cos(phi), s = std::sin(phi);
  LatticeOperator id_block = identity_operator(U.domain);

  LatticeOperator cos_block = id_block;
  cos_block.entries *= c;
  LatticeOperator upper = U;
  upper.entries = -s * Uinv;
  LatticeOperator lower = U;
  lower.entries = s * U.entries;

  const LatticeOperator rot = block2(&cos_block, &upper, &lower, &cos_block);
  const LatticeOperator id2 = identity_operator(ModeLattice(U.domain.dim, U.domain.K, 2 * U.domain.r));
  LatticeOperator out = direct_sum(id2, rot);
  out.order = 0;
  out.bandwidth = U.bandwidth;
  out.parity = U.parity == Parity::Even ? Parity::Even : Parity::None;
  out.label = "rotation(" + U.label + "," + std::to_string(phi) + ")";
  return out;
}

namespace {

// Gram structure that makes an idempotent block self-adjoint: the square root
// of H = p*p + (1-p)*(1-p) conjugates p into a Hermitian projection, because
// H p = p* H = p* p.
CMatrix gram_root(const CMatrix& p) {
  const CMatrix q = CMatrix::Identity(p.rows(), p.cols()) - p;
  const CMatrix H = p.adjoint() * p + q.adjoint() * q;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.eigenvalues()(0) < 1e-12)
    throw NumericError("orthogonalize_metric: interpolated metric is degenerate");
  return hermitian_power(H, 0.5, 0.0);
}

}  // namespace

OrthogonalizeResult orthogonalize_metric(const SpectralSubspace& L) {
  if (!L.symbol) throw ContractError("orthogonalize_metric: subspace carries no symbol sample");
  const auto pc = odd_projection_check(*L.symbol, 1e-8);
  if (!pc.ok)
    throw ContractError("orthogonalize_metric: symbol is not an odd projection (idempotency " +
                        std::to_string(pc.idempotency_residual) + ", oddness " +
                        std::to_string(pc.oddness_residual) + ")");
  if (L.projection.bandwidth != 0)
    throw ConfigError("orthogonalize_metric: only multiplier-type projections are supported");

  const auto& grid = *L.symbol->grid;
  // x-independence: the change of basis is assembled at multiplier level.
  for (int b = 1; b < grid.base_count(); ++b)
    for (int c = 0; c < grid.codirection_count(); ++c)
      if (opnorm(L.symbol->at(b, c) - L.symbol->at(0, c)) > 1e-12)
        throw ConfigError("orthogonalize_metric: x-dependent symbols are not supported");

  if (L.symbol->rows() != L.ambient.r)
    throw ContractError("orthogonalize_metric: symbol fiber rank does not match the lattice");

  // Metric roots per sampled codirection: these form the declared (even)
  // symbol of U. H is even because p(-xi) = 1 - p(xi) swaps the two terms.
  std::vector<CMatrix> roots(grid.codirection_count());
  for (int c = 0; c < grid.codirection_count(); ++c) roots[c] = gram_root(L.symbol->at(0, c));

  // The operator-level change of basis takes each mode's own projection
  // block; this covers every lattice mode (including k = 0, where no
  // codirection is defined) and agrees with the symbol roots wherever the
  // block equals a sampled symbol value.
  const ModeLattice& lat = L.ambient;
  MultiplierFn a = [&](const std::array<int, 2>& k) -> CMatrix {
    const int m = lat.mode_index(k);
    const CMatrix block = L.projection.entries.block(m * lat.r, m * lat.r, lat.r, lat.r);
    return gram_root(block);
  };

  auto u_symbol = std::make_shared<SymbolSample>();
  u_symbol->grid = L.symbol->grid;
  u_symbol->degree = 0;
  u_symbol->values.reserve(L.symbol->values.size());
  for (int b = 0; b < grid.base_count(); ++b)
    for (int c = 0; c < grid.codirection_count(); ++c) u_symbol->values.push_back(roots[c]);

  OrthogonalizeResult out;
  out.U = assemble_multiplier(L.ambient, a, 0, Parity::Even, u_symbol,
                              "orthogonalize(" + L.symbol_id + ")");

  // Conjugated subspace, with the symbol transformed pointwise.
  out.subspace = map_subspace(out.U, L, L.symbol_id);
  auto new_symbol = std::make_shared<SymbolSample>();
  new_symbol->grid = L.symbol->grid;
  new_symbol->degree = L.symbol->degree;
  new_symbol->values.reserve(L.symbol->values.size());
  for (int b = 0; b < grid.base_count(); ++b)
    for (int c = 0; c < grid.codirection_count(); ++c) {
      Eigen::PartialPivLU<CMatrix> lu(roots[c]);
      new_symbol->values.push_back(
          roots[c] * L.symbol->at(b, c) *
          lu.solve(CMatrix::Identity(L.ambient.r, L.ambient.r)));
    }
  out.subspace.symbol = new_symbol;
  out.subspace.projection.symbol = new_symbol;
  out.subspace.provenance.back() = "orthogonalized by metric square root";
  out.hermitian_residual = hermiticity_residual(out.subspace.projection.entries);
  out.subspace.orthogonal = out.hermitian_residual <= 1e-8;
  return out;
}

}  // namespace oddlab
