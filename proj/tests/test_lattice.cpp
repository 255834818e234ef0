#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/lattice.hpp"

using namespace oddlab;

namespace {

MultiplierFn scalar_fn(std::function<cplx(const std::array<int, 2>&)> f) {
  return [f](const std::array<int, 2>& k) {
    CMatrix v(1, 1);
    v(0, 0) = f(k);
    return v;
  };
}

}  // namespace

TEST_CASE("mode enumeration is lexicographic with fiber fastest") {
  const ModeLattice s1(1, 2, 1);
  CHECK(s1.mode_count() == 5);
  for (int k = -2; k <= 2; ++k) CHECK(s1.mode_index({k, 0}) == k + 2);

  const ModeLattice t2(2, 1, 3);
  CHECK(t2.mode_count() == 9);
  CHECK(t2.size() == 27);
  // independent oracle: walk the lexicographic order by hand
  const std::array<std::array<int, 2>, 9> expected = {{{-1, -1},
                                                       {-1, 0},
                                                       {-1, 1},
                                                       {0, -1},
                                                       {0, 0},
                                                       {0, 1},
                                                       {1, -1},
                                                       {1, 0},
                                                       {1, 1}}};
  for (int m = 0; m < 9; ++m) {
    CHECK(t2.mode(m) == expected[m]);
    CHECK(t2.mode_index(expected[m]) == m);
  }
  CHECK(t2.flat(4, 2) == 14);  // fiber index varies fastest
  CHECK_THROWS_AS(t2.mode_index({2, 0}), ContractError);
  CHECK_THROWS_AS(ModeLattice(3, 1, 1), ConfigError);
}

TEST_CASE("multiplier assembly is exact on pure modes") {
  const ModeLattice s1(1, 2, 1);
  const auto id = assemble_multiplier(s1, scalar_fn([](auto&) { return cplx(1.0); }), 0);
  CHECK((id.entries - CMatrix::Identity(5, 5)).norm() == 0.0);

  const auto mom = assemble_multiplier(s1, scalar_fn([](const std::array<int, 2>& k) {
                                         return cplx(static_cast<double>(k[0]));
                                       }),
                                       1);
  for (int k = -2; k <= 2; ++k) CHECK(mom.entries(k + 2, k + 2) == cplx(static_cast<double>(k)));
  CHECK(mom.bandwidth == 0);

  // T^2 dbar: enumerate the lattice by hand and evaluate a
  const ModeLattice t2(2, 1, 1);
  const auto dbar = assemble_multiplier(t2, scalar_fn([](const std::array<int, 2>& k) {
                                          return cplx(static_cast<double>(k[0]), static_cast<double>(k[1]));
                                        }),
                                        1);
  int zeros = 0;
  for (int m = 0; m < 9; ++m) {
    const auto k = t2.mode(m);
    const cplx want(static_cast<double>(k[0]), static_cast<double>(k[1]));
    CHECK(dbar.entries(m, m) == want);
    if (want == cplx(0.0)) ++zeros;
  }
  CHECK(zeros == 1);

  // applying to a pure mode reproduces a(k) exactly, including fiber action
  const ModeLattice t2r2(2, 2, 2);
  std::mt19937_64 rng(7);
  std::vector<CMatrix> blocks(t2r2.mode_count());
  for (auto& b : blocks) b = random_matrix(2, 2, rng);
  const auto op = assemble_multiplier(
      t2r2, [&](const std::array<int, 2>& k) { return blocks[t2r2.mode_index(k)]; }, 0);
  for (int m = 0; m < t2r2.mode_count(); ++m)
    for (int f = 0; f < 2; ++f) {
      const auto out = apply(op, pure_mode(t2r2, t2r2.mode(m), f));
      CVector expected = CVector::Zero(t2r2.size());
      expected.segment(m * 2, 2) = blocks[m].col(f);
      CHECK((out.coefficients - expected).norm() == 0.0);
    }

  // rank mismatch is a configuration error
  CHECK_THROWS_AS(assemble_multiplier(t2r2, scalar_fn([](auto&) { return cplx(1.0); }), 0),
                  ConfigError);
}

TEST_CASE("variable-coefficient assembly is Fourier convolution") {
  const ModeLattice s1(1, 2, 1);
  const auto b_id = [](const std::array<int, 2>&) { return CMatrix(CMatrix::Identity(1, 1)); };

  // constant coefficient degenerates to the multiplier
  const auto as_mult = assemble_variable_coeff(
      s1, {{TrigPoly::constant(1.0), scalar_fn([](const std::array<int, 2>& k) {
              return cplx(static_cast<double>(k[0]));
            })}},
      1);
  const auto direct = assemble_multiplier(s1, scalar_fn([](const std::array<int, 2>& k) {
                                            return cplx(static_cast<double>(k[0]));
                                          }),
                                          1);
  CHECK((as_mult.entries - direct.entries).norm() == 0.0);
  CHECK(as_mult.bandwidth == 0);

  // e^{ix}: shift by one mode; the oracle matrix has ones on (k, k-1)
  const auto shift = assemble_variable_coeff(s1, {{TrigPoly::exponential({1, 0}), b_id}}, 0);
  CMatrix expected = CMatrix::Zero(5, 5);
  for (int k = -1; k <= 2; ++k) expected(k + 2, k + 1) = 1.0;
  CHECK((shift.entries - expected).norm() == 0.0);
  CHECK(shift.bandwidth == 1);
  // the top mode row is margin-flagged
  CHECK(!mode_is_interior(s1, s1.mode_index({2, 0}), shift.bandwidth));
  CHECK(mode_is_interior(s1, s1.mode_index({1, 0}), shift.bandwidth));

  // two terms: diagonal plus symmetric shift
  const auto sum = assemble_variable_coeff(
      s1, {{TrigPoly::constant(1.0), scalar_fn([](const std::array<int, 2>& k) {
              return cplx(static_cast<double>(k[0]));
            })},
           {TrigPoly::cosine({1, 0}), b_id}},
      1);
  CMatrix oracle = direct.entries;
  for (int k = -1; k <= 2; ++k) oracle(k + 2, k + 1) += 0.5;
  for (int k = -2; k <= 1; ++k) oracle(k + 2, k + 3) += 0.5;
  CHECK((sum.entries - oracle).norm() == 0.0);

  // harmonics beyond the truncation are not representable
  CHECK_THROWS_AS(assemble_variable_coeff(s1, {{TrigPoly::exponential({3, 0}), b_id}}, 0),
                  ConfigError);
}

TEST_CASE("entries outside the declared band vanish") {
  const ModeLattice t2(2, 3, 1);
  const auto op = assemble_variable_coeff(
      t2, {{TrigPoly{{{{1, 0}, 0.5}, {{0, -2}, cplx(0.0, 1.0)}}},
            [](const std::array<int, 2>&) { return CMatrix(CMatrix::Identity(1, 1)); }}},
      0);
  CHECK(op.bandwidth == 2);
  for (int mo = 0; mo < t2.mode_count(); ++mo)
    for (int mi = 0; mi < t2.mode_count(); ++mi) {
      const auto ko = t2.mode(mo), ki = t2.mode(mi);
      const int dist = std::max(std::abs(ko[0] - ki[0]), std::abs(ko[1] - ki[1]));
      if (dist > op.bandwidth) CHECK(op.entries(mo, mi) == cplx(0.0));
    }
}

TEST_CASE("operator algebra") {
  const ModeLattice s1(1, 2, 1);
  const auto mom = momentum_s1(2);
  const auto adj = adjoint(mom);
  CHECK((adj.entries - mom.entries).norm() == 0.0);  // real diagonal is self-adjoint
  CHECK(adj.order == mom.order);
  CHECK(adj.parity == Parity::Odd);

  // shifts compose to the identity on the margin-trusted block
  const auto up = shift_s1(2, 1);
  const auto down = shift_s1(2, -1);
  const auto round_trip = compose(down, up);
  CHECK(round_trip.bandwidth == 2);
  const auto interior = interior_flat_indices(s1, round_trip.bandwidth);
  for (int i : interior)
    for (int j : interior)
      CHECK(std::abs(round_trip.entries(i, j) - (i == j ? 1.0 : 0.0)) == 0.0);

  const auto id5 = identity_operator(s1);
  const auto id10 = direct_sum(id5, id5);
  CHECK((id10.entries - CMatrix::Identity(10, 10)).norm() == 0.0);
  CHECK(id10.domain.r == 2);

  CHECK_THROWS_AS(compose(momentum_s1(2), momentum_s1(3)), ContractError);

  // compose(adjoint(X), X) is Hermitian PSD
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    LatticeOperator X;
    X.domain = X.codomain = s1;
    X.entries = random_matrix(5, 5, rng);
    const auto gram = compose(adjoint(X), X);
    CHECK(hermiticity_residual(gram.entries) < 1e-12);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram.entries);
    CHECK(es.eigenvalues()(0) > -1e-12);
  }
}

TEST_CASE("block2 and selectors") {
  const auto d = dbar_t2(1);
  const auto dstar = adjoint(d);
  const auto block = block2(nullptr, &dstar, &d, nullptr);
  CHECK(block.domain.r == 2);
  CHECK(hermiticity_residual(block.entries) == 0.0);

  const auto sel = second_summand_selector(d.domain, d.codomain);
  CHECK(sel.entries.rows() == 9);
  CHECK(sel.entries.cols() == 18);
  // (u, v) -> v on a pure mode
  Section u{sel.domain, CVector::Zero(18)};
  u.coefficients(2 * 4 + 0) = 3.0;  // mode (0,0), first fiber slot
  u.coefficients(2 * 4 + 1) = 5.0;  // second slot
  const auto out = apply(sel, u);
  CHECK(out.coefficients(4) == cplx(5.0));
}

TEST_CASE("kernel dimension by thresholded singular values") {
  CHECK(kernel_dim(identity_operator(ModeLattice(1, 2, 1)), 1e-8) == 0);
  CHECK(kernel_dim(dbar_t2(1), 1e-8) == 1);

  // the block Hamiltonian of dbar has a two-dimensional kernel
  const auto d = dbar_t2(1);
  const auto dstar = adjoint(d);
  const auto A = block2(nullptr, &dstar, &d, nullptr);
  CHECK(kernel_dim(A, 1e-8) == 2);

  const auto zero = zero_operator(ModeLattice(1, 1, 1), ModeLattice(1, 1, 1));
  CHECK(kernel_dim(zero, 1e-8) == 3);  // documented: full domain dimension

  // invariance under well-conditioned invertible factors
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    LatticeOperator M = dbar_t2(1);
    const CMatrix g = random_well_conditioned(9, rng, 1e3);
    LatticeOperator gd = M;
    gd.entries = g * M.entries;
    CHECK(kernel_dim(gd, 1e-8) == kernel_dim(M, 1e-8));
  }
}

TEST_CASE("margin bookkeeping") {
  const ModeLattice t2(2, 2, 1);
  CHECK(interior_flat_indices(t2, 0).size() == 25);
  CHECK(interior_flat_indices(t2, 1).size() == 9);
  CHECK(interior_flat_indices(t2, 2).size() == 1);
  CVector v = CVector::Zero(25);
  v(t2.mode_index({2, 0})) = 1.0;
  CHECK(margin_mass(t2, v, 1) == 1.0);
  v(t2.mode_index({0, 0})) = 1.0;
  CHECK(margin_mass(t2, v, 1) == doctest::Approx(0.5));
}

TEST_CASE("csv dumps round-trip at full precision") {
  std::mt19937_64 rng(5);
  const ModeLattice t2(2, 1, 2);
  LatticeOperator op;
  op.domain = op.codomain = t2;
  op.entries = random_matrix(t2.size(), t2.size(), rng);
  std::stringstream ss;
  write_csv(op, ss);
  const auto parsed = read_csv(ss);
  CHECK(parsed.dim == 2);
  CHECK(parsed.K == 1);
  CHECK(parsed.r == 2);
  REQUIRE(parsed.entries.rows() == op.entries.rows());
  CHECK((parsed.entries - op.entries).norm() == 0.0);  // 17 digits round-trip doubles

  std::stringstream bad("no header\n1+1i\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

TEST_CASE("admissibility pattern checks") {
  const auto mom = momentum_s1(3);
  const auto rep = check_admissibility(mom, 1e-10);
  CHECK(rep.principal_checked);
  CHECK(rep.principal_ok);
  CHECK(rep.multiplier_checked);
  CHECK(rep.multiplier_ok);

  const auto lap = check_admissibility(laplacian_s1(3), 1e-10);
  CHECK(lap.principal_ok);
  CHECK(lap.multiplier_ok);

  // an odd-order multiplier with a constant offset breaks the pairing pattern
  const auto shifted = assemble_multiplier(
      ModeLattice(1, 3, 1), scalar_fn([](const std::array<int, 2>& k) {
        return cplx(static_cast<double>(k[0]) + 0.5);
      }),
      1);
  const auto bad = check_admissibility(shifted, 1e-10);
  CHECK(bad.multiplier_checked);
  CHECK(!bad.multiplier_ok);

  // variable-coefficient operators are honestly reported unchecked
  const auto var = check_admissibility(shift_s1(3, 1), 1e-10);
  CHECK(!var.multiplier_checked);
  CHECK(!var.unchecked.empty());
}

TEST_CASE("alpha conjugation and polar phase of multipliers") {
  const auto d = dbar_t2(2);
  const auto conj = alpha_conjugate_multiplier(d);
  const ModeLattice& lat = d.domain;
  for (int m = 0; m < lat.mode_count(); ++m) {
    const auto k = lat.mode(m);
    const int mm = lat.mode_index({-k[0], -k[1]});
    CHECK(conj.entries(m, m) == d.entries(mm, mm));
  }

  const auto phase = multiplier_polar_phase(d, 1e-9);
  for (int m = 0; m < lat.mode_count(); ++m) {
    const cplx a = d.entries(m, m);
    const cplx p = phase.entries(m, m);
    if (a == cplx(0.0))
      CHECK(p == cplx(0.0));
    else
      CHECK(std::abs(p - a / std::abs(a)) < 1e-14);
  }
  CHECK(kernel_dim(phase, 1e-9) == kernel_dim(d, 1e-9));

  CHECK_THROWS_AS(alpha_conjugate_multiplier(shift_s1(2, 1)), ContractError);
}
