#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/symbol.hpp"

using namespace oddlab;

namespace {
const CMatrix kId2 = CMatrix::Identity(2, 2);
}

TEST_CASE("grids store exact antipodal pairs") {
  const auto s1 = CosphereGrid::circle(4);
  CHECK(s1->codirections[0][0] == 1.0);
  CHECK(s1->codirections[1][0] == -1.0);
  CHECK(s1->antipode[0] == 1);

  const auto t2 = CosphereGrid::torus(2, 8);
  REQUIRE(t2->codirection_count() == 8);
  for (int c = 0; c < 8; ++c) {
    const int a = t2->antipode[c];
    CHECK(t2->antipode[a] == c);
    // bitwise negation, not approximate
    CHECK(t2->codirections[c][0] == -t2->codirections[a][0]);
    CHECK(t2->codirections[c][1] == -t2->codirections[a][1]);
  }
  CHECK_THROWS_AS(CosphereGrid::torus(2, 7), ConfigError);
}

TEST_CASE("pullback is an exact involution") {
  const auto grid = default_grid(2);
  const auto pauli_s = pauli_symbol(grid);
  const auto twice = pullback_alpha(pullback_alpha(pauli_s));
  for (size_t i = 0; i < pauli_s.values.size(); ++i)
    CHECK((twice.values[i] - pauli_s.values[i]).norm() == 0.0);

  // constant symbols are fixed; odd linear symbols flip sign exactly
  const auto constant = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(pauli(3)); });
  const auto moved = pullback_alpha(constant);
  for (size_t i = 0; i < constant.values.size(); ++i)
    CHECK((moved.values[i] - constant.values[i]).norm() == 0.0);

  const auto flipped = pullback_alpha(pauli_s);
  for (size_t i = 0; i < pauli_s.values.size(); ++i)
    CHECK((flipped.values[i] + pauli_s.values[i]).norm() == 0.0);
}

TEST_CASE("parity residuals") {
  const auto grid = default_grid(2);
  const auto pauli_s = pauli_symbol(grid);
  const auto id_s = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(kId2); });

  CHECK(parity_check(id_s, Parity::Even, 1e-14).ok);
  CHECK(parity_check(id_s, Parity::Even, 1e-14).residual == 0.0);
  CHECK(parity_check(pauli_s, Parity::Odd, 1e-14).ok);

  const auto even = parity_check(pauli_s, Parity::Even, 1e-14);
  CHECK(!even.ok);
  CHECK(even.residual == doctest::Approx(2.0).epsilon(1e-12));  // ||2 sigma|| at unit xi

  CHECK_THROWS_AS(parity_check(pauli_s, Parity::None, 1e-12), ContractError);
  CHECK_THROWS_AS(parity_check(pauli_s, Parity::Odd, 0.0), ContractError);
}

TEST_CASE("odd projection predicate") {
  const auto grid = default_grid(2);
  const auto proj = positive_symbol_projection(pauli_symbol(grid), 1e-10);
  CHECK(odd_projection_check(proj, 1e-10).ok);

  const auto id_s = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(kId2); });
  const auto bad = odd_projection_check(id_s, 1e-10);
  CHECK(!bad.ok);
  CHECK(bad.oddness_residual == doctest::Approx(1.0));  // Id + Id - Id

  const auto hardy = hardy_symbol(default_grid(1));
  CHECK(odd_projection_check(hardy, 1e-14).ok);
}

TEST_CASE("rank constraint from the manifold dimension") {
  CHECK(rank_constraint_check(1, 2));       // n-1 = 1: vacuous
  CHECK(rank_constraint_check(2, 6));       // n-1 = 5, k = 2: multiples of 2
  CHECK(!rank_constraint_check(3, 6));
  CHECK(rank_constraint_check(7, 3));       // k = 1: every rank
  CHECK(rank_constraint_check(4, 8));       // n-1 = 7, k = 3: multiples of 4
  CHECK(!rank_constraint_check(6, 8));
  CHECK_THROWS_AS(rank_constraint_check(0, 2), ContractError);
}

TEST_CASE("positive symbol projection") {
  const auto grid = default_grid(2);

  const auto id_s = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(kId2); });
  const auto p_id = positive_symbol_projection(id_s, 1e-10);
  for (const auto& v : p_id.values) CHECK(opnorm(v - kId2) < 1e-14);

  const auto diag_s = sample_symbol(grid, 0, [](auto&, auto&) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
  });
  const auto p_diag = positive_symbol_projection(diag_s, 1e-10);
  for (const auto& v : p_diag.values) {
    CHECK(std::abs(v(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(v(1, 1)) < 1e-14);
  }

  // Pauli: closed form (Id + xi.sigma)/2 on the unit cosphere
  const auto p = positive_symbol_projection(pauli_symbol(grid), 1e-10);
  for (int b = 0; b < grid->base_count(); ++b)
    for (int c = 0; c < grid->codirection_count(); ++c) {
      const auto& xi = grid->codirections[c];
      const CMatrix expected = (kId2 + xi[0] * pauli(1) + xi[1] * pauli(2)) / 2.0;
      CHECK(opnorm(p.at(b, c) - expected) < 1e-12);
    }

  // the defining identity of odd spectral projections
  const auto pulled = pullback_alpha(p);
  for (size_t i = 0; i < p.values.size(); ++i)
    CHECK(opnorm(p.values[i] + pulled.values[i] - kId2) < 1e-10);

  // degenerate values are refused with the grid point named
  const auto singular = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(CMatrix::Zero(2, 2)); });
  CHECK_THROWS_AS(positive_symbol_projection(singular, 1e-10), NumericError);
}

TEST_CASE("clifford symbols on the exterior algebra") {
  const auto gen3 = clifford_generators(3);
  const CMatrix id8 = CMatrix::Identity(8, 8);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CMatrix anti = gen3[i] * gen3[j] + gen3[j] * gen3[i];
      CHECK(opnorm(anti - (i == j ? 2.0 : 0.0) * id8) < 1e-12);
    }

  const auto grid = default_grid(2);
  const auto cl2 = clifford_symbol(2, grid);
  REQUIRE(cl2.rows() == 4);
  const CMatrix id4 = CMatrix::Identity(4, 4);
  for (int b = 0; b < grid->base_count(); ++b)
    for (int c = 0; c < grid->codirection_count(); ++c) {
      const CMatrix& v = cl2.at(b, c);
      CHECK(opnorm(v - v.adjoint()) < 1e-14);
      CHECK(opnorm(v * v - id4) < 1e-12);                       // |xi| = 1
      CHECK(opnorm(v + cl2.at(b, grid->antipode[c])) == 0.0);   // linear in xi
    }

  // anticommutator identity across distinct grid codirections
  for (int c1 = 0; c1 < grid->codirection_count(); ++c1)
    for (int c2 = 0; c2 < grid->codirection_count(); ++c2) {
      const auto& xi = grid->codirections[c1];
      const auto& eta = grid->codirections[c2];
      const double dot = xi[0] * eta[0] + xi[1] * eta[1];
      const CMatrix lhs = cl2.at(0, c1) * cl2.at(0, c2) + cl2.at(0, c2) * cl2.at(0, c1);
      CHECK(opnorm(lhs - 2.0 * dot * id4) < 1e-12);
    }

  // projection of the N = 3 symbol is an odd projection at 1e-10
  const auto p3 = positive_symbol_projection(clifford_symbol(3, grid), 1e-10);
  CHECK(odd_projection_check(p3, 1e-10).ok);

  // N = 1 on the circle: 2x2, eigenvalues +-xi
  const auto s1 = CosphereGrid::circle(4);
  const auto cl1 = clifford_symbol(1, s1);
  REQUIRE(cl1.rows() == 2);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(cl1.at(0, 0));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(clifford_symbol(1, default_grid(2)), ConfigError);  // N < dim
}

TEST_CASE("clifford rejects degenerate frames") {
  const auto grid = default_grid(2);
  CovectorFrameFn degenerate = [](const std::array<double, 2>&) {
    std::vector<Eigen::VectorXd> f(2, Eigen::VectorXd::Zero(3));
    f[0](0) = 1.0;
    f[1](0) = 1.0;  // parallel to f[0]
    return f;
  };
  CHECK_THROWS_AS(clifford_symbol(3, degenerate, grid), ConfigError);
}

TEST_CASE("doubled even extension from a fiberwise isomorphism") {
  const auto grid = default_grid(2);
  const auto p = positive_symbol_projection(pauli_symbol(grid), 1e-10);
  const auto sigma = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(pauli(3)); });

  const auto doubled = fund_extension(sigma, p, 1e-10);
  REQUIRE(doubled.rows() == 4);
  CHECK(parity_check(doubled, Parity::Even, 1e-12).ok);
  const CMatrix id4 = CMatrix::Identity(4, 4);
  for (const auto& v : doubled.values) CHECK(opnorm(v * v.inverse() - id4) < 1e-10);

  // an isomorphism that fails to carry L into the antipodal image is refused
  const auto bad_sigma = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(kId2); });
  CHECK_THROWS_AS(fund_extension(bad_sigma, p, 1e-10), NumericError);

  // and a non-projection p is rejected up front
  const auto not_proj = sample_symbol(grid, 0, [](auto&, auto&) { return CMatrix(2.0 * kId2); });
  CHECK_THROWS_AS(fund_extension(sigma, not_proj, 1e-10), ContractError);
}

TEST_CASE("boundary gluing across the double") {
  const auto pauli_gc = boundary_gluing_check(pauli_symbol(default_grid(2)), 1e-12);
  CHECK(pauli_gc.ok);
  CHECK(pauli_gc.residual <= 1e-12);
  CHECK(pauli_gc.failed_precondition.empty());

  const auto id_s = sample_symbol(default_grid(2), 0, [](auto&, auto&) { return CMatrix(kId2); });
  const auto even_gc = boundary_gluing_check(id_s, 1e-12);
  CHECK(!even_gc.ok);
  CHECK(even_gc.failed_precondition == "odd");
  CHECK(even_gc.residual == doctest::Approx(2.0));  // worst defect at tau = 0

  // scaled Pauli symbol: odd and Hermitian but not an involution
  const auto scaled = sample_symbol(default_grid(2), 1, [](auto&, const std::array<double, 2>& xi) {
    return CMatrix(2.0 * (xi[0] * pauli(1) + xi[1] * pauli(2)));
  });
  const auto bad = boundary_gluing_check(scaled, 1e-12);
  CHECK(!bad.ok);
  CHECK(bad.failed_precondition == "squares-to-identity");
}

TEST_CASE("parallel and serial sampling agree bitwise") {
  const auto grid = CosphereGrid::torus(4, 8);
  SymbolFn fn = [](const std::array<double, 2>& x, const std::array<double, 2>& xi) {
    return CMatrix(std::sin(x[0]) * pauli(1) + (xi[0] + 2.0 * xi[1]) * pauli(2));
  };
  const auto a = sample_symbol(grid, 1, fn);
  const auto b = sample_symbol_serial(grid, 1, fn);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) CHECK((a.values[i] - b.values[i]).norm() == 0.0);
}
