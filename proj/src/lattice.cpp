#include "oddlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "oddlab/errors.hpp"
#include "oddlab/parallel.hpp"

namespace oddlab {

ModeLattice::ModeLattice(int dim_, int K_, int r_) : dim(dim_), K(K_), r(r_) {
  if (dim != 1 && dim != 2) throw ConfigError("ModeLattice: dim must be 1 (S^1) or 2 (T^2)");
  if (K < 0) throw ConfigError("ModeLattice: truncation K must be nonnegative");
  if (r < 1) throw ConfigError("ModeLattice: fiber rank must be positive");
}

int ModeLattice::mode_count() const {
  int m = modes_per_axis();
  return dim == 1 ? m : m * m;
}

std::array<int, 2> ModeLattice::mode(int mode_idx) const {
  const int m = modes_per_axis();
  if (dim == 1) return {mode_idx - K, 0};
  return {mode_idx / m - K, mode_idx % m - K};
}

int ModeLattice::mode_index(const std::array<int, 2>& k) const {
  const int m = modes_per_axis();
  if (std::abs(k[0]) > K || (dim == 2 && std::abs(k[1]) > K))
    throw ContractError("ModeLattice: mode outside truncation");
  return dim == 1 ? k[0] + K : (k[0] + K) * m + (k[1] + K);
}

std::string ModeLattice::str() const {
  return (dim == 1 ? std::string("s1") : std::string("t2")) + "(K=" + std::to_string(K) +
         ",r=" + std::to_string(r) + ")";
}

Section pure_mode(const ModeLattice& lattice, const std::array<int, 2>& k, int fiber) {
  if (fiber < 0 || fiber >= lattice.r) throw ContractError("pure_mode: fiber index out of range");
  Section s{lattice, CVector::Zero(lattice.size())};
  s.coefficients(lattice.flat(lattice.mode_index(k), fiber)) = 1.0;
  return s;
}

namespace {

template <bool Serial>
CMatrix fill_multiplier(const ModeLattice& lattice, const MultiplierFn& a) {
  const int M = lattice.mode_count(), r = lattice.r;
  CMatrix entries = CMatrix::Zero(lattice.size(), lattice.size());
  std::vector<int> bad(M, 0);
  auto body = [&](std::ptrdiff_t m) {
    const CMatrix block = a(lattice.mode(static_cast<int>(m)));
    if (block.rows() != r || block.cols() != r) {
      bad[m] = 1;
      return;
    }
    entries.block(m * r, m * r, r, r) = block;
  };
  if constexpr (Serial)
    par::serial_for(M, body);
  else
    par::parallel_for(M, body);
  for (int m = 0; m < M; ++m)
    if (bad[m])
      throw ConfigError("assemble_multiplier: a(k) rank mismatch with fiber rank at mode " +
                        std::to_string(m));
  return entries;
}

}  // namespace

LatticeOperator assemble_multiplier(const ModeLattice& lattice, const MultiplierFn& a, int order,
                                    Parity parity, std::shared_ptr<const SymbolSample> symbol,
                                    std::string label) {
  LatticeOperator op;
  op.domain = op.codomain = lattice;
  op.entries = fill_multiplier<false>(lattice, a);
  op.order = order;
  op.bandwidth = 0;
  op.parity = parity;
  op.symbol = std::move(symbol);
  op.label = std::move(label);
  return op;
}

LatticeOperator assemble_multiplier_serial(const ModeLattice& lattice, const MultiplierFn& a,
                                           int order) {
  LatticeOperator op;
  op.domain = op.codomain = lattice;
  op.entries = fill_multiplier<true>(lattice, a);
  op.order = order;
  op.bandwidth = 0;
  return op;
}

int TrigPoly::degree() const {
  int d = 0;
  for (const auto& [h, c] : harmonics) d = std::max({d, std::abs(h[0]), std::abs(h[1])});
  return d;
}

TrigPoly TrigPoly::cosine(const std::array<int, 2>& h) {
  return TrigPoly{{{h, 0.5}, {{-h[0], -h[1]}, 0.5}}};
}

namespace {

template <bool Serial>
CMatrix fill_variable_coeff(const ModeLattice& lattice, const std::vector<VarCoeffTerm>& terms) {
  const int M = lattice.mode_count(), r = lattice.r;
  CMatrix entries = CMatrix::Zero(lattice.size(), lattice.size());

  // Precompute the multiplier blocks once per term (column-mode dependent).
  std::vector<std::vector<CMatrix>> blocks(terms.size());
  for (size_t t = 0; t < terms.size(); ++t) {
    blocks[t].resize(M);
    for (int m = 0; m < M; ++m) {
      blocks[t][m] = terms[t].multiplier(lattice.mode(m));
      if (blocks[t][m].rows() != r || blocks[t][m].cols() != r)
        throw ConfigError("assemble_variable_coeff: multiplier rank mismatch with fiber rank");
    }
  }

  auto body = [&](std::ptrdiff_t mo) {
    const auto k_out = lattice.mode(static_cast<int>(mo));
    for (size_t t = 0; t < terms.size(); ++t)
      for (const auto& [h, c] : terms[t].coeff.harmonics) {
        const std::array<int, 2> k_in = {k_out[0] - h[0], k_out[1] - h[1]};
        if (std::abs(k_in[0]) > lattice.K || (lattice.dim == 2 && std::abs(k_in[1]) > lattice.K))
          continue;  // sharp cutoff: source mode not represented
        const int mi = lattice.mode_index(k_in);
        entries.block(mo * r, mi * r, r, r) += c * blocks[t][mi];
      }
  };
  if constexpr (Serial)
    par::serial_for(M, body);
  else
    par::parallel_for(M, body);
  return entries;
}

int variable_coeff_bandwidth(const ModeLattice& lattice, const std::vector<VarCoeffTerm>& terms) {
  int band = 0;
  for (const auto& term : terms) band = std::max(band, term.coeff.degree());
  if (band > lattice.K)
    throw ConfigError("assemble_variable_coeff: coefficient harmonic degree " + std::to_string(band) +
                      " exceeds truncation K=" + std::to_string(lattice.K) +
                      "; operator not representable");
  return band;
}

}  // namespace

LatticeOperator assemble_variable_coeff(const ModeLattice& lattice,
                                        const std::vector<VarCoeffTerm>& terms, int order,
                                        Parity parity, std::shared_ptr<const SymbolSample> symbol,
                                        std::string label) {
  LatticeOperator op;
  op.domain = op.codomain = lattice;
  op.bandwidth = variable_coeff_bandwidth(lattice, terms);
  op.entries = fill_variable_coeff<false>(lattice, terms);
  op.order = order;
  op.parity = parity;
  op.symbol = std::move(symbol);
  op.label = std::move(label);
  return op;
}

LatticeOperator assemble_variable_coeff_serial(const ModeLattice& lattice,
                                               const std::vector<VarCoeffTerm>& terms, int order) {
  LatticeOperator op;
  op.domain = op.codomain = lattice;
  op.bandwidth = variable_coeff_bandwidth(lattice, terms);
  op.entries = fill_variable_coeff<true>(lattice, terms);
  op.order = order;
  return op;
}

namespace {

Parity compose_parity(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return a == b ? Parity::Even : Parity::Odd;
}

std::shared_ptr<const SymbolSample> compose_symbols(const LatticeOperator& a,
                                                    const LatticeOperator& b) {
  if (!a.symbol || !b.symbol || a.symbol->grid != b.symbol->grid) return nullptr;
  if (a.symbol->cols() != b.symbol->rows()) return nullptr;
  auto out = std::make_shared<SymbolSample>();
  out->grid = a.symbol->grid;
  out->degree = a.symbol->degree + b.symbol->degree;
  out->values.resize(a.symbol->values.size());
  for (size_t i = 0; i < out->values.size(); ++i)
    out->values[i] = a.symbol->values[i] * b.symbol->values[i];
  return out;
}

}  // namespace

LatticeOperator compose(const LatticeOperator& a, const LatticeOperator& b) {
  if (b.codomain != a.domain)
    throw ContractError("compose: lattices incompatible (" + b.codomain.str() + " -> " +
                        a.domain.str() + ")");
  LatticeOperator op;
  op.domain = b.domain;
  op.codomain = a.codomain;
  op.entries = a.entries * b.entries;
  op.order = a.order + b.order;
  op.bandwidth = a.bandwidth + b.bandwidth;
  op.parity = compose_parity(a.parity, b.parity);
  op.symbol = compose_symbols(a, b);
  op.label = a.label.empty() || b.label.empty() ? a.label + b.label : a.label + "*" + b.label;
  return op;
}

LatticeOperator adjoint(const LatticeOperator& a) {
  LatticeOperator op;
  op.domain = a.codomain;
  op.codomain = a.domain;
  op.entries = a.entries.adjoint();
  op.order = a.order;
  op.bandwidth = a.bandwidth;
  op.parity = a.parity;  // pullback by alpha commutes with the fiber adjoint
  if (a.symbol) {
    auto s = std::make_shared<SymbolSample>();
    s->grid = a.symbol->grid;
    s->degree = a.symbol->degree;
    s->values.resize(a.symbol->values.size());
    for (size_t i = 0; i < s->values.size(); ++i) s->values[i] = a.symbol->values[i].adjoint();
    op.symbol = std::move(s);
  }
  op.label = a.label.empty() ? a.label : a.label + "^*";
  return op;
}

LatticeOperator direct_sum(const LatticeOperator& a, const LatticeOperator& b) {
  if (a.domain.dim != b.domain.dim || a.domain.K != b.domain.K || a.codomain.K != b.codomain.K ||
      a.codomain.dim != b.codomain.dim)
    throw ContractError("direct_sum: mode lattices differ");
  LatticeOperator op;
  op.domain = ModeLattice(a.domain.dim, a.domain.K, a.domain.r + b.domain.r);
  op.codomain = ModeLattice(a.codomain.dim, a.codomain.K, a.codomain.r + b.codomain.r);
  op.entries = CMatrix::Zero(op.codomain.size(), op.domain.size());
  const int M_out = op.codomain.mode_count(), M_in = op.domain.mode_count();
  const int ra_o = a.codomain.r, rb_o = b.codomain.r, ra_i = a.domain.r, rb_i = b.domain.r;
  for (int mo = 0; mo < M_out; ++mo)
    for (int mi = 0; mi < M_in; ++mi) {
      op.entries.block(mo * (ra_o + rb_o), mi * (ra_i + rb_i), ra_o, ra_i) =
          a.entries.block(mo * ra_o, mi * ra_i, ra_o, ra_i);
      op.entries.block(mo * (ra_o + rb_o) + ra_o, mi * (ra_i + rb_i) + ra_i, rb_o, rb_i) =
          b.entries.block(mo * rb_o, mi * rb_i, rb_o, rb_i);
    }
  op.order = std::max(a.order, b.order);
  op.bandwidth = std::max(a.bandwidth, b.bandwidth);
  op.parity = a.parity == b.parity ? a.parity : Parity::None;
  if (a.symbol && b.symbol && a.symbol->grid == b.symbol->grid) {
    auto s = std::make_shared<SymbolSample>();
    s->grid = a.symbol->grid;
    s->degree = std::max(a.symbol->degree, b.symbol->degree);
    s->values.resize(a.symbol->values.size());
    for (size_t i = 0; i < s->values.size(); ++i) {
      const CMatrix &va = a.symbol->values[i], &vb = b.symbol->values[i];
      CMatrix v = CMatrix::Zero(va.rows() + vb.rows(), va.cols() + vb.cols());
      v.topLeftCorner(va.rows(), va.cols()) = va;
      v.bottomRightCorner(vb.rows(), vb.cols()) = vb;
      s->values[i] = v;
    }
    op.symbol = std::move(s);
  }
  if (!a.label.empty() || !b.label.empty()) op.label = a.label + "(+)" + b.label;
  return op;
}

Section apply(const LatticeOperator& a, const Section& u) {
  if (u.lattice != a.domain) throw ContractError("apply: section lattice does not match operator domain");
  return Section{a.codomain, a.entries * u.coefficients};
}

LatticeOperator block2(const LatticeOperator* a11, const LatticeOperator* a12,
                       const LatticeOperator* a21, const LatticeOperator* a22) {
  const LatticeOperator* probe_top = a11 ? a11 : a12;
  const LatticeOperator* probe_bottom = a21 ? a21 : a22;
  const LatticeOperator* probe_left = a11 ? a11 : a21;
  const LatticeOperator* probe_right = a12 ? a12 : a22;
  if (!probe_top || !probe_bottom || !probe_left || !probe_right)
    throw ContractError("block2: a full zero row or column of blocks is ambiguous");
  const ModeLattice out_top = probe_top->codomain, out_bottom = probe_bottom->codomain;
  const ModeLattice in_left = probe_left->domain, in_right = probe_right->domain;
  auto check = [&](const LatticeOperator* blk, const ModeLattice& cod, const ModeLattice& dom) {
    if (blk && (blk->codomain != cod || blk->domain != dom))
      throw ContractError("block2: inconsistent block lattices");
  };
  check(a11, out_top, in_left);
  check(a12, out_top, in_right);
  check(a21, out_bottom, in_left);
  check(a22, out_bottom, in_right);
  if (out_top.dim != out_bottom.dim || out_top.K != out_bottom.K || in_left.dim != in_right.dim ||
      in_left.K != in_right.K || out_top.dim != in_left.dim || out_top.K != in_left.K)
    throw ContractError("block2: blocks live on different mode lattices");

  LatticeOperator op;
  op.domain = ModeLattice(in_left.dim, in_left.K, in_left.r + in_right.r);
  op.codomain = ModeLattice(out_top.dim, out_top.K, out_top.r + out_bottom.r);
  op.entries = CMatrix::Zero(op.codomain.size(), op.domain.size());
  const int M = op.domain.mode_count();
  const int ro = out_top.r + out_bottom.r, ri = in_left.r + in_right.r;
  for (int mo = 0; mo < M; ++mo)
    for (int mi = 0; mi < M; ++mi) {
      auto put = [&](const LatticeOperator* blk, int row_off, int col_off, int rows, int cols,
                     int blk_ro, int blk_ri) {
        if (!blk) return;
        op.entries.block(mo * ro + row_off, mi * ri + col_off, rows, cols) =
            blk->entries.block(mo * blk_ro, mi * blk_ri, rows, cols);
      };
      put(a11, 0, 0, out_top.r, in_left.r, out_top.r, in_left.r);
      put(a12, 0, in_left.r, out_top.r, in_right.r, out_top.r, in_right.r);
      put(a21, out_top.r, 0, out_bottom.r, in_left.r, out_bottom.r, in_left.r);
      put(a22, out_top.r, in_left.r, out_bottom.r, in_right.r, out_bottom.r, in_right.r);
    }
  for (const LatticeOperator* blk : {a11, a12, a21, a22}) {
    if (!blk) continue;
    op.order = std::max(op.order, blk->order);
    op.bandwidth = std::max(op.bandwidth, blk->bandwidth);
  }
  return op;
}

LatticeOperator identity_operator(const ModeLattice& lattice) {
  LatticeOperator op;
  op.domain = op.codomain = lattice;
  op.entries = CMatrix::Identity(lattice.size(), lattice.size());
  op.parity = Parity::Even;
  op.label = "id";
  return op;
}

LatticeOperator zero_operator(const ModeLattice& domain, const ModeLattice& codomain) {
  LatticeOperator op;
  op.domain = domain;
  op.codomain = codomain;
  op.entries = CMatrix::Zero(codomain.size(), domain.size());
  return op;
}

LatticeOperator second_summand_selector(const ModeLattice& latticeE, const ModeLattice& latticeF) {
  if (latticeE.dim != latticeF.dim || latticeE.K != latticeF.K)
    throw ContractError("second_summand_selector: mode lattices differ");
  const int rE = latticeE.r, rF = latticeF.r;
  LatticeOperator op;
  op.domain = ModeLattice(latticeE.dim, latticeE.K, rE + rF);
  op.codomain = latticeF;
  op.entries = CMatrix::Zero(op.codomain.size(), op.domain.size());
  for (int m = 0; m < op.domain.mode_count(); ++m)
    op.entries.block(m * rF, m * (rE + rF) + rE, rF, rF) = CMatrix::Identity(rF, rF);
  op.parity = Parity::Even;
  op.label = "P0";
  return op;
}

LatticeOperator alpha_conjugate_multiplier(const LatticeOperator& op) {
  if (op.bandwidth != 0 || !op.square())
    throw ContractError("alpha_conjugate_multiplier: operator is not a square multiplier");
  const ModeLattice& lat = op.domain;
  LatticeOperator out = op;
  for (int m = 0; m < lat.mode_count(); ++m) {
    const auto k = lat.mode(m);
    const int mm = lat.mode_index({-k[0], -k[1]});
    out.entries.block(m * lat.r, m * lat.r, lat.r, lat.r) =
        op.entries.block(mm * lat.r, mm * lat.r, lat.r, lat.r);
  }
  if (op.symbol) out.symbol = std::make_shared<SymbolSample>(pullback_alpha(*op.symbol));
  if (!op.label.empty()) out.label = "alpha*" + op.label;
  return out;
}

LatticeOperator multiplier_polar_phase(const LatticeOperator& op, double rank_tol) {
  if (op.bandwidth != 0) throw ContractError("multiplier_polar_phase: operator is not a multiplier");
  const double scale = opnorm(op.entries);
  const ModeLattice& in = op.domain;
  const ModeLattice& out_lat = op.codomain;
  if (in.r != out_lat.r || in.mode_count() != out_lat.mode_count())
    throw ContractError("multiplier_polar_phase: fiber ranks differ");
  LatticeOperator out = op;
  out.order = 0;
  for (int m = 0; m < in.mode_count(); ++m) {
    const CMatrix block = op.entries.block(m * in.r, m * in.r, in.r, in.r);
    Eigen::BDCSVD<CMatrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd gate = Eigen::VectorXd::Zero(svd.singularValues().size());
    for (int i = 0; i < gate.size(); ++i)
      gate(i) = svd.singularValues()(i) > rank_tol * scale ? 1.0 : 0.0;
    out.entries.block(m * in.r, m * in.r, in.r, in.r) =
        svd.matrixU() * gate.asDiagonal() * svd.matrixV().adjoint();
  }
  if (op.symbol) {
    out.symbol = std::make_shared<SymbolSample>(
        map_symbol(*op.symbol, 0, [](const CMatrix& v) -> CMatrix {
          Eigen::BDCSVD<CMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
          return svd.matrixU() * svd.matrixV().adjoint();
        }));
  }
  if (!op.label.empty()) out.label = "phase(" + op.label + ")";
  return out;
}

int kernel_dim(const LatticeOperator& op, double rank_tol) {
  if (rank_tol <= 0.0) throw ContractError("kernel_dim: rank_tol must be positive");
  Eigen::BDCSVD<CMatrix> svd(op.entries);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return static_cast<int>(op.entries.cols());
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) >= rank_tol * smax) ++rank;
  return static_cast<int>(op.entries.cols()) - rank;
}

bool mode_is_interior(const ModeLattice& lattice, int mode_idx, int band) {
  const auto k = lattice.mode(mode_idx);
  if (std::abs(k[0]) > lattice.K - band) return false;
  if (lattice.dim == 2 && std::abs(k[1]) > lattice.K - band) return false;
  return true;
}

std::vector<int> interior_flat_indices(const ModeLattice& lattice, int band) {
  std::vector<int> out;
  for (int m = 0; m < lattice.mode_count(); ++m)
    if (mode_is_interior(lattice, m, band))
      for (int f = 0; f < lattice.r; ++f) out.push_back(lattice.flat(m, f));
  return out;
}

double margin_mass(const ModeLattice& lattice, const CVector& v, int band) {
  if (v.size() != lattice.size()) throw ContractError("margin_mass: vector length mismatch");
  const double total = v.squaredNorm();
  if (total == 0.0) return 0.0;
  double margin = 0.0;
  for (int m = 0; m < lattice.mode_count(); ++m)
    if (!mode_is_interior(lattice, m, band))
      for (int f = 0; f < lattice.r; ++f) margin += std::norm(v(lattice.flat(m, f)));
  return margin / total;
}

void write_csv(const LatticeOperator& op, std::ostream& os) {
  os << "# lattice dim=" << op.domain.dim << " K=" << op.domain.K << " r=" << op.domain.r << "\n";
  char buf[80];
  for (Eigen::Index i = 0; i < op.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.entries.cols(); ++j) {
      const cplx z = op.entries(i, j);
      std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
}

namespace {

cplx parse_entry(const std::string& tok) {
  // "re+imi" / "re-imi": the imaginary part starts at the last sign that is
  // not an exponent sign and not the leading sign of the real part.
  if (tok.empty() || tok.back() != 'i') throw ConfigError("csv entry not in re+imi form: " + tok);
  const std::string body = tok.substr(0, tok.size() - 1);
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    const char ch = body[i];
    if ((ch == '+' || ch == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) throw ConfigError("csv entry missing imaginary part: " + tok);
  return cplx(std::stod(body.substr(0, split)), std::stod(body.substr(split)));
}

}  // namespace

CsvMatrix read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ConfigError("csv: empty stream");
  CsvMatrix out;
  if (std::sscanf(header.c_str(), "# lattice dim=%d K=%d r=%d", &out.dim, &out.K, &out.r) != 3)
    throw ConfigError("csv: bad header line: " + header);
  std::vector<std::vector<cplx>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<cplx> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_entry(tok));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("csv: no matrix rows");
  out.entries.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

AdmissibilityReport check_admissibility(const LatticeOperator& op, double tol) {
  if (tol <= 0.0) throw ContractError("check_admissibility: tol must be positive");
  AdmissibilityReport rep;
  const Parity expected = op.order % 2 == 0 ? Parity::Even : Parity::Odd;
  if (op.symbol) {
    rep.principal_checked = true;
    const auto pc = parity_check(*op.symbol, expected, tol);
    rep.principal_ok = pc.ok;
    rep.principal_residual = pc.residual;
  }
  if (op.bandwidth == 0 && op.square()) {
    // Pure multiplier: a(-k) = (-1)^order a(k) is checkable entrywise.
    rep.multiplier_checked = true;
    const double sign = expected == Parity::Even ? 1.0 : -1.0;
    const ModeLattice& lat = op.domain;
    double worst = 0.0;
    for (int m = 0; m < lat.mode_count(); ++m) {
      const auto k = lat.mode(m);
      if (k[0] == 0 && k[1] == 0) continue;  // parity constraints hold away from 0
      const int mm = lat.mode_index({-k[0], -k[1]});
      worst = std::max(worst, (op.entries.block(mm * lat.r, mm * lat.r, lat.r, lat.r) -
                               sign * op.entries.block(m * lat.r, m * lat.r, lat.r, lat.r))
                                  .norm());
    }
    rep.multiplier_residual = worst;
    rep.multiplier_ok = worst <= tol * std::max(1.0, op.entries.norm());
    rep.unchecked = "lower-order terms below the multiplier pattern";
  } else {
    rep.unchecked = "variable-coefficient lower-order terms not representable at truncation";
  }
  return rep;
}

}  // namespace oddlab
