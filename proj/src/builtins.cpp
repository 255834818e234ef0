#include "oddlab/builtins.hpp"

#include <cctype>
#include <cmath>

#include "oddlab/errors.hpp"
#include "oddlab/spectral.hpp"

namespace oddlab {

CMatrix pauli(int i) {
  CMatrix m(2, 2);
  const cplx I(0.0, 1.0);
  switch (i) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw ConfigError("pauli: index must be 1, 2 or 3");
  }
  return m;
}

std::shared_ptr<const CosphereGrid> default_grid(int dim) {
  static const auto s1 = CosphereGrid::circle(256);
  static const auto t2 = CosphereGrid::torus(2, 8);
  if (dim == 1) return s1;
  if (dim == 2) return t2;
  throw ConfigError("default_grid: dim must be 1 or 2");
}

SymbolSample pauli_symbol(std::shared_ptr<const CosphereGrid> grid) {
  const CMatrix s1 = pauli(1), s2 = pauli(2);
  return sample_symbol(std::move(grid), 1,
                       [s1, s2](const std::array<double, 2>&, const std::array<double, 2>& xi) {
                         return CMatrix(xi[0] * s1 + xi[1] * s2);
                       });
}

SymbolSample hardy_symbol(std::shared_ptr<const CosphereGrid> grid) {
  if (grid->dim != 1) throw ConfigError("hardy_symbol: lives on S^1");
  return sample_symbol(std::move(grid), 0,
                       [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
                         CMatrix v(1, 1);
                         v(0, 0) = xi[0] > 0 ? 1.0 : 0.0;
                         return v;
                       });
}

LatticeOperator momentum_s1(int K) {
  auto sym = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(1), 1, [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
        CMatrix v(1, 1);
        v(0, 0) = xi[0];
        return v;
      }));
  return assemble_multiplier(
      ModeLattice(1, K, 1),
      [](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        v(0, 0) = static_cast<double>(k[0]);
        return v;
      },
      1, Parity::Odd, sym, "momentum");
}

LatticeOperator laplacian_s1(int K, double shift) {
  auto sym = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(1), 2, [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
        CMatrix v(1, 1);
        v(0, 0) = xi[0] * xi[0];
        return v;
      }));
  return assemble_multiplier(
      ModeLattice(1, K, 1),
      [shift](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        v(0, 0) = static_cast<double>(k[0]) * k[0] + shift;
        return v;
      },
      2, Parity::Even, sym, "laplacian+" + std::to_string(shift));
}

LatticeOperator shift_s1(int K, int n) {
  auto sym = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(1), 0, [n](const std::array<double, 2>& x, const std::array<double, 2>&) {
        CMatrix v(1, 1);
        v(0, 0) = std::exp(cplx(0.0, n * x[0]));
        return v;
      }));
  std::vector<VarCoeffTerm> terms{{TrigPoly::exponential({n, 0}),
                                   [](const std::array<int, 2>&) { return CMatrix::Identity(1, 1); }}};
  return assemble_variable_coeff(ModeLattice(1, K, 1), terms, 0, Parity::Even, sym,
                                 "shift(" + std::to_string(n) + ")");
}

LatticeOperator dirac_t2(int K) {
  if (K < 1) throw ConfigError("dirac_t2: needs K >= 1 for a nonzero mode");
  auto sym = std::make_shared<SymbolSample>(pauli_symbol(default_grid(2)));
  const CMatrix s1 = pauli(1), s2 = pauli(2);
  return assemble_multiplier(
      ModeLattice(2, K, 2),
      [s1, s2](const std::array<int, 2>& k) {
        return CMatrix(static_cast<double>(k[0]) * s1 + static_cast<double>(k[1]) * s2);
      },
      1, Parity::Odd, sym, "dirac");
}

LatticeOperator dbar_t2(int K, cplx shift) {
  auto sym = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(2), 1, [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
        CMatrix v(1, 1);
        v(0, 0) = cplx(xi[0], xi[1]);
        return v;
      }));
  std::string label = "dbar";
  if (shift != cplx(0.0)) label += "+shift";
  return assemble_multiplier(
      ModeLattice(2, K, 1),
      [shift](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        v(0, 0) = cplx(static_cast<double>(k[0]), static_cast<double>(k[1])) + shift;
        return v;
      },
      1, Parity::Odd, sym, label);
}

LatticeOperator clifford_dirac_t2(int K, int N) {
  if (N < 2) throw ConfigError("clifford_dirac_t2: needs N >= 2 on the torus");
  auto sym = std::make_shared<SymbolSample>(clifford_symbol(N, default_grid(2)));
  const auto gen = clifford_generators(N);
  return assemble_multiplier(
      ModeLattice(2, K, 1 << N),
      [gen](const std::array<int, 2>& k) {
        return CMatrix(static_cast<double>(k[0]) * gen[0] + static_cast<double>(k[1]) * gen[1]);
      },
      1, Parity::Odd, sym, "clifford(" + std::to_string(N) + ")");
}

LatticeOperator constant_fiber_multiplier(const ModeLattice& lattice, const CMatrix& c,
                                          std::string label) {
  if (c.rows() != lattice.r || c.cols() != lattice.r)
    throw ConfigError("constant_fiber_multiplier: matrix does not match the fiber rank");
  auto sym = std::make_shared<SymbolSample>(
      sample_symbol(default_grid(lattice.dim), 0,
                    [c](const std::array<double, 2>&, const std::array<double, 2>&) { return c; }));
  return assemble_multiplier(
      lattice, [c](const std::array<int, 2>&) { return c; }, 0, Parity::Even, sym, std::move(label));
}

SpectralSubspace hardy_space_from(int K, int lowest_mode) {
  const ModeLattice lat(1, K, 1);
  SpectralSubspace L;
  L.ambient = lat;
  L.projection = assemble_multiplier(
      lat,
      [lowest_mode](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        v(0, 0) = k[0] >= lowest_mode ? 1.0 : 0.0;
        return v;
      },
      0);
  L.symbol = std::make_shared<SymbolSample>(hardy_symbol(default_grid(1)));
  L.projection.symbol = L.symbol;
  L.orthogonal = true;
  L.symbol_id = "hardy";
  L.provenance.push_back("modes k >= " + std::to_string(lowest_mode) + " on S^1, K=" +
                         std::to_string(K));
  return L;
}

SpectralSubspace hardy_space(int K) { return hardy_space_from(K, 0); }

SpectralSubspace halfspace_t2(int K) {
  const ModeLattice lat(2, K, 1);
  auto upper_xi = [](double x0, double x1) { return x1 > 0.0 || (x1 == 0.0 && x0 > 0.0); };
  SpectralSubspace L;
  L.ambient = lat;
  L.projection = assemble_multiplier(
      lat,
      [upper_xi](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        const bool in = (k[0] == 0 && k[1] == 0) || upper_xi(k[0], k[1]);
        v(0, 0) = in ? 1.0 : 0.0;
        return v;
      },
      0);
  L.symbol = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(2), 0, [upper_xi](const std::array<double, 2>&, const std::array<double, 2>& xi) {
        CMatrix v(1, 1);
        v(0, 0) = upper_xi(xi[0], xi[1]) ? 1.0 : 0.0;
        return v;
      }));
  L.projection.symbol = L.symbol;
  L.orthogonal = true;
  L.symbol_id = "halfspace";
  L.provenance.push_back("upper half-lattice modes on T^2, K=" + std::to_string(K));
  return L;
}

namespace {

// Minimal recursive-descent parser for scalar multiplier expressions.
struct ExprParser {
  const std::string& src;
  size_t pos = 0;
  int dim;

  char peek() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    return pos < src.size() ? src[pos] : '\0';
  }
  bool eat(char ch) {
    if (peek() == ch) {
      ++pos;
      return true;
    }
    return false;
  }

  // Parsed into a closure over the mode.
  using Fn = std::function<cplx(const std::array<int, 2>&)>;

  Fn parse() {
    Fn e = expr();
    if (peek() != '\0') throw ConfigError("multiplier expression: trailing input at '" + src.substr(pos) + "'");
    return e;
  }

  Fn expr() {
    Fn left = term();
    while (true) {
      if (eat('+')) {
        Fn right = term();
        left = [left, right](const std::array<int, 2>& k) { return left(k) + right(k); };
      } else if (eat('-')) {
        Fn right = term();
        left = [left, right](const std::array<int, 2>& k) { return left(k) - right(k); };
      } else {
        return left;
      }
    }
  }

  Fn term() {
    Fn left = unary();
    while (true) {
      if (eat('*')) {
        Fn right = unary();
        left = [left, right](const std::array<int, 2>& k) { return left(k) * right(k); };
      } else if (eat('/')) {
        Fn right = unary();
        left = [left, right](const std::array<int, 2>& k) { return left(k) / right(k); };
      } else {
        return left;
      }
    }
  }

  Fn unary() {
    if (eat('-')) {
      Fn inner = unary();
      return [inner](const std::array<int, 2>& k) { return -inner(k); };
    }
    Fn base = primary();
    if (eat('^')) {
      const char c = peek();
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ConfigError("multiplier expression: '^' needs a nonnegative integer exponent");
      int e = 0;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        e = e * 10 + (src[pos++] - '0');
      return [base, e](const std::array<int, 2>& k) {
        cplx acc = 1.0;
        const cplx b = base(k);
        for (int t = 0; t < e; ++t) acc *= b;
        return acc;
      };
    }
    return base;
  }

  Fn primary() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      Fn inner = expr();
      if (!eat(')')) throw ConfigError("multiplier expression: missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      const double v = std::stod(src.substr(pos), &used);
      pos += used;
      return [v](const std::array<int, 2>&) { return cplx(v); };
    }
    if (c == 'i' && !(pos + 1 < src.size() && std::isalnum(static_cast<unsigned char>(src[pos + 1])))) {
      ++pos;
      return [](const std::array<int, 2>&) { return cplx(0.0, 1.0); };
    }
    if (c == 'k') {
      ++pos;
      if (pos < src.size() && (src[pos] == '1' || src[pos] == '2')) {
        const int comp = src[pos] - '1';
        ++pos;
        if (dim != 2) throw ConfigError("multiplier expression: k1/k2 need the torus");
        return [comp](const std::array<int, 2>& k) { return cplx(static_cast<double>(k[comp])); };
      }
      if (dim != 1) throw ConfigError("multiplier expression: bare k needs S^1 (use k1/k2 on the torus)");
      return [](const std::array<int, 2>& k) { return cplx(static_cast<double>(k[0])); };
    }
    throw ConfigError("multiplier expression: unexpected character '" + std::string(1, c) + "'");
  }
};

}  // namespace

MultiplierFn parse_multiplier_expr(const std::string& expr, int dim) {
  ExprParser parser{expr, 0, dim};
  auto fn = parser.parse();
  return [fn](const std::array<int, 2>& k) {
    CMatrix v(1, 1);
    v(0, 0) = fn(k);
    return v;
  };
}

LatticeOperator operator_from_spec(const std::string& spec, const std::string& manifold, int K) {
  const int dim = manifold == "s1" ? 1 : manifold == "t2" ? 2 : 0;
  if (dim == 0) throw ConfigError("operator_from_spec: manifold must be 's1' or 't2'");
  if (spec == "dirac") {
    if (dim != 2) throw ConfigError("operator_from_spec: dirac lives on t2");
    return dirac_t2(K);
  }
  if (spec == "momentum") {
    if (dim != 1) throw ConfigError("operator_from_spec: momentum lives on s1");
    return momentum_s1(K);
  }
  if (spec == "dbar") {
    if (dim != 2) throw ConfigError("operator_from_spec: dbar lives on t2");
    return dbar_t2(K);
  }
  if (spec == "laplacian") {
    if (dim != 1) throw ConfigError("operator_from_spec: laplacian builtin lives on s1");
    return laplacian_s1(K);
  }
  if (spec.starts_with("shift:")) {
    if (dim != 1) throw ConfigError("operator_from_spec: shift lives on s1");
    return shift_s1(K, std::stoi(spec.substr(6)));
  }
  if (spec.starts_with("clifford:")) {
    if (dim != 2) throw ConfigError("operator_from_spec: clifford builtin lives on t2");
    return clifford_dirac_t2(K, std::stoi(spec.substr(9)));
  }
  if (spec.starts_with("multiplier:")) {
    const auto fn = parse_multiplier_expr(spec.substr(11), dim);
    return assemble_multiplier(ModeLattice(dim, K, 1), fn, 0, Parity::None, nullptr, spec);
  }
  throw ConfigError("operator_from_spec: unknown operator spec '" + spec + "'");
}

SpectralSubspace subspace_from_spec(const std::string& spec, const std::string& manifold, int K,
                                    double rank_tol) {
  const int dim = manifold == "s1" ? 1 : manifold == "t2" ? 2 : 0;
  if (dim == 0) throw ConfigError("subspace_from_spec: manifold must be 's1' or 't2'");
  if (spec == "hardy") {
    if (dim != 1) throw ConfigError("subspace_from_spec: hardy lives on s1");
    return hardy_space(K);
  }
  if (spec == "dirac:L+") {
    if (dim != 2) throw ConfigError("subspace_from_spec: dirac:L+ lives on t2");
    return nonnegative_spectral_subspace(dirac_t2(K), rank_tol, "dirac:L+");
  }
  if (spec == "halfspace") {
    if (dim != 2) throw ConfigError("subspace_from_spec: halfspace lives on t2");
    return halfspace_t2(K);
  }
  throw ConfigError("subspace_from_spec: unknown subspace spec '" + spec + "'");
}

}  // namespace oddlab
