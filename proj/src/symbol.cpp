#include "oddlab/symbol.hpp"

#include <cmath>
#include <numbers>

#include "oddlab/errors.hpp"
#include "oddlab/parallel.hpp"

namespace oddlab {

namespace {

void require_antipodal(const CosphereGrid& g) {
  const int nc = g.codirection_count();
  for (int c = 0; c < nc; ++c) {
    const int a = g.antipode[c];
    if (a < 0 || a >= nc || g.antipode[a] != c)
      throw ContractError("cosphere grid is not antipodally closed");
    for (int d = 0; d < 2; ++d)
      if (g.codirections[c][d] != -g.codirections[a][d])
        throw ContractError("cosphere grid antipode is not the exact negation");
  }
}

void require_square(const SymbolSample& s, const char* who) {
  if (s.rows() != s.cols()) throw ContractError(std::string(who) + ": symbol fiber is not square");
}

}  // namespace

std::shared_ptr<const CosphereGrid> CosphereGrid::circle(int base_samples) {
  if (base_samples < 1) throw ConfigError("circle grid needs at least one base point");
  auto g = std::make_shared<CosphereGrid>();
  g->dim = 1;
  g->base_points.resize(base_samples);
  for (int j = 0; j < base_samples; ++j)
    g->base_points[j] = {2.0 * std::numbers::pi * j / base_samples, 0.0};
  g->codirections = {{1.0, 0.0}, {-1.0, 0.0}};
  g->antipode = {1, 0};
  return g;
}

std::shared_ptr<const CosphereGrid> CosphereGrid::torus(int base_samples_per_axis,
                                                        int codirection_count) {
  if (base_samples_per_axis < 1) throw ConfigError("torus grid needs at least one base point per axis");
  if (codirection_count < 2 || codirection_count % 2 != 0)
    throw ConfigError("torus codirection count must be even and >= 2");
  auto g = std::make_shared<CosphereGrid>();
  g->dim = 2;
  const int nb = base_samples_per_axis;
  g->base_points.reserve(static_cast<size_t>(nb) * nb);
  for (int j = 0; j < nb; ++j)
    for (int l = 0; l < nb; ++l)
      g->base_points.push_back({2.0 * std::numbers::pi * j / nb, 2.0 * std::numbers::pi * l / nb});
  const int half = codirection_count / 2;
  g->codirections.resize(codirection_count);
  g->antipode.resize(codirection_count);
  for (int c = 0; c < half; ++c) {
    const double th = std::numbers::pi * c / half;
    g->codirections[c] = {std::cos(th), std::sin(th)};
    // exact negation, so the involution is bitwise on stored entries
    g->codirections[c + half] = {-g->codirections[c][0], -g->codirections[c][1]};
    g->antipode[c] = c + half;
    g->antipode[c + half] = c;
  }
  return g;
}

SymbolSample sample_symbol_serial(std::shared_ptr<const CosphereGrid> grid, int degree,
                                  const SymbolFn& fn) {
  SymbolSample s;
  s.grid = std::move(grid);
  s.degree = degree;
  const int nb = s.grid->base_count(), nc = s.grid->codirection_count();
  s.values.resize(static_cast<size_t>(nb) * nc);
  par::serial_for(static_cast<std::ptrdiff_t>(s.values.size()), [&](std::ptrdiff_t i) {
    const int b = static_cast<int>(i) / nc, c = static_cast<int>(i) % nc;
    s.values[i] = fn(s.grid->base_points[b], s.grid->codirections[c]);
  });
  return s;
}

SymbolSample sample_symbol(std::shared_ptr<const CosphereGrid> grid, int degree, const SymbolFn& fn) {
  SymbolSample s;
  s.grid = std::move(grid);
  s.degree = degree;
  const int nb = s.grid->base_count(), nc = s.grid->codirection_count();
  s.values.resize(static_cast<size_t>(nb) * nc);
  par::parallel_for(static_cast<std::ptrdiff_t>(s.values.size()), [&](std::ptrdiff_t i) {
    const int b = static_cast<int>(i) / nc, c = static_cast<int>(i) % nc;
    s.values[i] = fn(s.grid->base_points[b], s.grid->codirections[c]);
  });
  return s;
}

SymbolSample map_symbol_serial(const SymbolSample& s, int degree,
                               const std::function<CMatrix(const CMatrix&)>& fn) {
  SymbolSample out;
  out.grid = s.grid;
  out.degree = degree;
  out.values.resize(s.values.size());
  par::serial_for(static_cast<std::ptrdiff_t>(s.values.size()),
                  [&](std::ptrdiff_t i) { out.values[i] = fn(s.values[i]); });
  return out;
}

SymbolSample map_symbol(const SymbolSample& s, int degree,
                        const std::function<CMatrix(const CMatrix&)>& fn) {
  SymbolSample out;
  out.grid = s.grid;
  out.degree = degree;
  out.values.resize(s.values.size());
  par::parallel_for(static_cast<std::ptrdiff_t>(s.values.size()),
                    [&](std::ptrdiff_t i) { out.values[i] = fn(s.values[i]); });
  return out;
}

SymbolSample pullback_alpha(const SymbolSample& s) {
  require_antipodal(*s.grid);
  SymbolSample out;
  out.grid = s.grid;
  out.degree = s.degree;
  out.values.resize(s.values.size());
  const int nb = s.grid->base_count(), nc = s.grid->codirection_count();
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nc; ++c) out.at(b, c) = s.at(b, s.grid->antipode[c]);
  return out;
}

ParityCheck parity_check(const SymbolSample& s, Parity kind, double tol) {
  if (tol <= 0.0) throw ContractError("parity_check: tol must be positive");
  if (kind == Parity::None) throw ContractError("parity_check: kind must be even or odd");
  require_antipodal(*s.grid);
  const double sign = kind == Parity::Even ? -1.0 : 1.0;
  double worst = 0.0;
  const int nb = s.grid->base_count(), nc = s.grid->codirection_count();
  std::vector<double> res(static_cast<size_t>(nb) * nc);
  par::parallel_for(static_cast<std::ptrdiff_t>(res.size()), [&](std::ptrdiff_t i) {
    const int b = static_cast<int>(i) / nc, c = static_cast<int>(i) % nc;
    res[i] = opnorm(s.at(b, s.grid->antipode[c]) + sign * s.at(b, c));
  });
  for (double r : res) worst = std::max(worst, r);
  return {worst <= tol, worst};
}

ProjectionCheck odd_projection_check(const SymbolSample& p, double tol) {
  if (tol <= 0.0) throw ContractError("odd_projection_check: tol must be positive");
  require_square(p, "odd_projection_check");
  require_antipodal(*p.grid);
  const CMatrix id = CMatrix::Identity(p.rows(), p.rows());
  double idem = 0.0, oddness = 0.0;
  const int nb = p.grid->base_count(), nc = p.grid->codirection_count();
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nc; ++c) {
      const CMatrix& v = p.at(b, c);
      idem = std::max(idem, opnorm(v * v - v));
      oddness = std::max(oddness, opnorm(v + p.at(b, p.grid->antipode[c]) - id));
    }
  return {idem <= tol && oddness <= tol, idem, oddness};
}

bool rank_constraint_check(int rank_L, int manifold_dim) {
  if (rank_L < 1 || manifold_dim < 1)
    throw ContractError("rank_constraint_check: rank and dimension must be positive");
  const int k = (manifold_dim - 1) / 2;
  if (k < 1) return true;  // 2^(k-1) <= 1: no constraint
  const int modulus = 1 << (k - 1);
  return rank_L % modulus == 0;
}

SymbolSample positive_symbol_projection(const SymbolSample& s, double tol) {
  if (tol <= 0.0) throw ContractError("positive_symbol_projection: tol must be positive");
  require_square(s, "positive_symbol_projection");
  const int nc = s.grid->codirection_count();
  SymbolSample out;
  out.grid = s.grid;
  out.degree = 0;
  out.values.resize(s.values.size());
  std::vector<int> degenerate(s.values.size(), 0);
  par::parallel_for(static_cast<std::ptrdiff_t>(s.values.size()), [&](std::ptrdiff_t i) {
    const CMatrix& v = s.values[i];
    Eigen::SelfAdjointEigenSolver<CMatrix> es((v + v.adjoint()) / 2.0);
    const auto& lam = es.eigenvalues();
    double min_abs = lam.size() ? std::abs(lam(0)) : 0.0;
    for (int j = 0; j < lam.size(); ++j) min_abs = std::min(min_abs, std::abs(lam(j)));
    if (opnorm(v - v.adjoint()) > tol || min_abs <= tol) {
      degenerate[i] = 1;
      return;
    }
    CMatrix p = CMatrix::Zero(v.rows(), v.cols());
    for (int j = 0; j < lam.size(); ++j)
      if (lam(j) >= 0.0) p += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    out.values[i] = p;
  });
  for (size_t i = 0; i < degenerate.size(); ++i)
    if (degenerate[i]) {
      const int b = static_cast<int>(i) / nc, c = static_cast<int>(i) % nc;
      throw NumericError("positive_symbol_projection: degenerate or non-Hermitian value at base point " +
                         std::to_string(b) + ", codirection " + std::to_string(c));
    }
  return out;
}

std::vector<CMatrix> clifford_generators(int N) {
  if (N < 1 || N > 12) throw ConfigError("clifford_generators: N out of supported range");
  const int dim = 1 << N;
  // Creation operator on the exterior algebra over C^N, basis indexed by
  // subset bitmasks; a_i^+ |S> = (-1)^{#{j in S, j < i}} |S u {i}>.
  auto creation = [&](int i) {
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int S = 0; S < dim; ++S) {
      if (S & (1 << i)) continue;
      int sign = 0;
      for (int j = 0; j < i; ++j)
        if (S & (1 << j)) ++sign;
      a(S | (1 << i), S) = (sign % 2 == 0) ? 1.0 : -1.0;
    }
    return a;
  };
  std::vector<CMatrix> gen(N);
  for (int i = 0; i < N; ++i) {
    const CMatrix a = creation(i);
    gen[i] = a + a.adjoint();
  }
  return gen;
}

SymbolSample clifford_symbol(int N, const CovectorFrameFn& frame,
                             std::shared_ptr<const CosphereGrid> grid) {
  if (N < grid->dim) throw ConfigError("clifford_symbol: N smaller than the manifold dimension");
  const auto gen = clifford_generators(N);
  const int dim = grid->dim;
  SymbolFn fn = [&, gen, dim](const std::array<double, 2>& x, const std::array<double, 2>& xi) {
    auto vectors = frame(x);
    if (static_cast<int>(vectors.size()) != dim)
      throw ConfigError("clifford_symbol: frame must supply one covector per manifold dimension");
    // Gram-Schmidt; the Clifford relations need an orthonormal frame.
    for (int a = 0; a < dim; ++a) {
      if (vectors[a].size() != N) throw ConfigError("clifford_symbol: frame vector has wrong length");
      for (int b = 0; b < a; ++b) vectors[a] -= vectors[b].dot(vectors[a]) * vectors[b];
      const double n = vectors[a].norm();
      if (n < 1e-10) throw ConfigError("clifford_symbol: degenerate covector frame");
      vectors[a] /= n;
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    for (int a = 0; a < dim; ++a) v += xi[a] * vectors[a];
    CMatrix m = CMatrix::Zero(1 << N, 1 << N);
    for (int i = 0; i < N; ++i) m += v(i) * gen[i];
    return m;
  };
  return sample_symbol(std::move(grid), 1, fn);
}

SymbolSample clifford_symbol(int N, std::shared_ptr<const CosphereGrid> grid) {
  const int dim = grid->dim;
  CovectorFrameFn flat = [N, dim](const std::array<double, 2>&) {
    std::vector<Eigen::VectorXd> frame(dim, Eigen::VectorXd::Zero(N));
    for (int a = 0; a < dim; ++a) frame[a](a) = 1.0;
    return frame;
  };
  return clifford_symbol(N, flat, std::move(grid));
}

SymbolSample fund_extension(const SymbolSample& sigma, const SymbolSample& p_L, double tol) {
  if (sigma.grid != p_L.grid) throw ContractError("fund_extension: sigma and p_L live on different grids");
  require_square(sigma, "fund_extension");
  require_square(p_L, "fund_extension");
  if (sigma.rows() != p_L.rows()) throw ContractError("fund_extension: fiber ranks differ");
  const auto pc = odd_projection_check(p_L, std::max(tol, 1e-10));
  if (!pc.ok)
    throw ContractError("fund_extension: p_L is not an odd projection (idempotency " +
                        std::to_string(pc.idempotency_residual) + ", oddness " +
                        std::to_string(pc.oddness_residual) + ")");

  const int r = p_L.rows();
  const int nb = p_L.grid->base_count(), nc = p_L.grid->codirection_count();
  const CMatrix id = CMatrix::Identity(r, r);
  SymbolSample out;
  out.grid = p_L.grid;
  out.degree = 0;
  out.values.resize(p_L.values.size());

  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nc; ++c) {
      const int ca = p_L.grid->antipode[c];
      const CMatrix& p = p_L.at(b, c);
      // sigma must carry range p(xi) into range p(-xi) = range(Id - p(xi)).
      const double consistency = opnorm(p * (sigma.at(b, c) * p));
      if (consistency > tol)
        throw NumericError("fund_extension: sigma does not map L into its antipodal image (residual " +
                           std::to_string(consistency) + ")");
      const CMatrix s = sigma.at(b, c) * p + sigma.at(b, ca) * (id - p);
      Eigen::PartialPivLU<CMatrix> lu(s);
      const CMatrix sinv = lu.solve(id);
      if (!(sinv * s - id).isZero(1e-8))
        throw NumericError("fund_extension: swap symbol is numerically singular");
      CMatrix doubled = CMatrix::Zero(2 * r, 2 * r);
      doubled.topLeftCorner(r, r) = s;
      doubled.bottomRightCorner(r, r) = sinv;
      out.at(b, c) = doubled;
    }
  return out;
}

GluingCheck boundary_gluing_check(const SymbolSample& boundary_symbol, double tol) {
  if (tol <= 0.0) throw ContractError("boundary_gluing_check: tol must be positive");
  require_square(boundary_symbol, "boundary_gluing_check");
  GluingCheck out;
  const auto odd = parity_check(boundary_symbol, Parity::Odd, tol);
  out.odd_residual = odd.residual;
  const int r = boundary_symbol.rows();
  const CMatrix id = CMatrix::Identity(r, r);
  const int nb = boundary_symbol.grid->base_count(), nc = boundary_symbol.grid->codirection_count();
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nc; ++c) {
      const CMatrix& v = boundary_symbol.at(b, c);
      out.hermitian_residual = std::max(out.hermitian_residual, opnorm(v - v.adjoint()));
      out.square_residual = std::max(out.square_residual, opnorm(v * v - id));
    }
  if (!odd.ok) out.failed_precondition = "odd";
  else if (out.hermitian_residual > tol) out.failed_precondition = "hermitian";
  else if (out.square_residual > tol) out.failed_precondition = "squares-to-identity";

  // Unit cosphere over the boundary: tau = cos(theta), xi' scaled by
  // sin(theta); the degree-1 boundary symbol scales with |xi'|. The theta grid
  // includes both poles tau = +/-1.
  const int n_theta = 17;
  const cplx I(0.0, 1.0);
  for (int t = 0; t < n_theta; ++t) {
    const double theta = std::numbers::pi * t / (n_theta - 1);
    const double tau = std::cos(theta), rho = std::sin(theta);
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nc; ++c) {
        const CMatrix d_plus = tau * id - I * rho * boundary_symbol.at(b, c);
        const CMatrix d_minus = tau * id - I * rho * boundary_symbol.at(b, boundary_symbol.grid->antipode[c]);
        out.residual = std::max(out.residual, opnorm(d_plus * d_minus - id));
      }
  }
  out.ok = out.failed_precondition.empty() && out.residual <= tol;
  return out;
}

}  // namespace oddlab
