#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/spectral.hpp"

using namespace oddlab;

namespace {

LatticeOperator herm_from(const ModeLattice& lat, const CMatrix& m, std::string label = {}) {
  LatticeOperator op;
  op.domain = op.codomain = lat;
  op.entries = m;
  op.label = std::move(label);
  return op;
}

}  // namespace

TEST_CASE("hermitian eigendecomposition") {
  const ModeLattice three(1, 1, 1);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.0;
  const auto eig = eig_hermitian(herm_from(three, d), 1e-8);
  CHECK(eig.spectrum.eigenvalues == std::vector<double>{-1.0, 0.0, 3.0});
  CHECK(eig.spectrum.kernel_dim == 1);
  CHECK(opnorm(eig.basis.adjoint() * eig.basis - CMatrix::Identity(3, 3)) < 1e-10);

  const auto mom = eig_hermitian(momentum_s1(2), 1e-8);
  CHECK(mom.spectrum.eigenvalues == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});

  // Dirac K=1 frozen oracle: +-|k| over the nine modes, fiber rank 2
  const auto dir = eig_hermitian(dirac_t2(1), 1e-8);
  std::vector<double> expected;
  for (int k1 = -1; k1 <= 1; ++k1)
    for (int k2 = -1; k2 <= 1; ++k2) {
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      expected.push_back(-r);
      expected.push_back(r);
    }
  std::sort(expected.begin(), expected.end());
  REQUIRE(dir.spectrum.eigenvalues.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i)
    CHECK(dir.spectrum.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(dir.spectrum.kernel_dim == 2);

  CMatrix nonherm = CMatrix::Zero(3, 3);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(herm_from(three, nonherm), 1e-8), ContractError);
}

TEST_CASE("eta invariant by greedy pairing") {
  // fully symmetric spectrum: only the kernel contributes
  const auto eta_dirac = eta_invariant(dirac_t2(2), 1e-9);
  CHECK(eta_dirac.exact_value() == 1);
  CHECK(eta_dirac.unpaired.empty());
  CHECK(eta_dirac.kernel_count == 2);
  CHECK(eta_dirac.exact);

  // finite asymmetry: diag(1, 2, 3)
  const ModeLattice three(1, 1, 1);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  const auto eta = eta_invariant(herm_from(three, d), 1e-9);
  CHECK(eta.exact_value() == Dyadic(3, 1));
  CHECK(eta.value == doctest::Approx(1.5));
  CHECK(eta.unpaired.size() == 3);
  CHECK(eta.symmetric_pairs == 0);

  // one asymmetric direction on top of a symmetric pair
  CMatrix d2 = CMatrix::Zero(3, 3);
  d2(0, 0) = -2.0;
  d2(1, 1) = 2.0;
  d2(2, 2) = 5.0;
  const auto eta2 = eta_invariant(herm_from(three, d2), 1e-9);
  CHECK(eta2.exact_value() == Dyadic(1, 1));
  CHECK(eta2.symmetric_pairs == 1);
}

TEST_CASE("block Hamiltonian spectra and the eta identity") {
  // D = 0 gives A = 0
  const auto zero = zero_operator(ModeLattice(1, 0, 1), ModeLattice(1, 0, 1));
  const auto a0 = hamiltonian_from_D(zero);
  CHECK(a0.entries.norm() == 0.0);

  const auto A = hamiltonian_from_D(dbar_t2(1));
  CHECK(hermiticity_residual(A.entries) == 0.0);
  const auto eig = eig_hermitian(A, 1e-9);
  CHECK(eig.spectrum.kernel_dim == 2);

  // spectrum = +- singular values of D, for a random rectangular-ish D
  std::mt19937_64 rng(3);
  const ModeLattice lat(1, 1, 2);
  LatticeOperator D;
  D.domain = D.codomain = lat;
  D.entries = random_matrix(6, 6, rng);
  const auto Ad = hamiltonian_from_D(D);
  const auto spec = eig_hermitian(Ad, 1e-10).spectrum.eigenvalues;
  Eigen::BDCSVD<CMatrix> svd(D.entries);
  std::vector<double> expected;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    expected.push_back(-svd.singularValues()(i));
    expected.push_back(svd.singularValues()(i));
  }
  std::sort(expected.begin(), expected.end());
  REQUIRE(spec.size() == expected.size());
  for (size_t i = 0; i < spec.size(); ++i) CHECK(spec[i] == doctest::Approx(expected[i]).epsilon(1e-10));

  // eta identity for the block construction, on seeded random multipliers:
  // eta(A) = -ind(D)/2 + dim ker D, exactly as dyadic rationals
  for (int trial = 0; trial < 3; ++trial) {
    const ModeLattice t2(2, 2, 1);
    std::vector<cplx> vals(t2.mode_count());
    for (auto& v : vals)
      v = rand_unit(rng) < 0.25 ? cplx(0.0) : cplx(0.4 + rand_unit(rng), rand_unit(rng) - 0.5);
    LatticeOperator Dm = assemble_multiplier(
        t2,
        [&](const std::array<int, 2>& k) {
          CMatrix v(1, 1);
          v(0, 0) = vals[t2.mode_index(k)];
          return v;
        },
        0);
    const auto eta = eta_invariant(hamiltonian_from_D(Dm), 1e-9);
    const long ind = kernel_dim(Dm, 1e-9) - kernel_dim(adjoint(Dm), 1e-9);
    const Dyadic expected = Dyadic(-ind, 1) + Dyadic::integer(kernel_dim(Dm, 1e-9));
    CHECK(eta.exact_value() == expected);
  }
}

TEST_CASE("positive projection formula vs the eigenbasis route") {
  const ModeLattice two(1, 0, 2);
  CMatrix d(2, 2);
  d << 2.0, 0.0, 0.0, -3.0;
  const auto p = positive_projection_formula(herm_from(two, d), 1e-8);
  CMatrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, 0.0;
  CHECK(opnorm(p.entries - expected) < 1e-12);

  // lifted Dirac: both routes agree to 1e-8
  LatticeOperator lifted = dirac_t2(2);
  lifted.entries += 0.1 * CMatrix::Identity(lifted.entries.rows(), lifted.entries.cols());
  const auto formula = positive_projection_formula(lifted, 1e-8);
  const auto eig = eig_hermitian(lifted, 1e-12);
  CMatrix eig_proj = CMatrix::Zero(lifted.entries.rows(), lifted.entries.cols());
  for (size_t i = 0; i < eig.spectrum.eigenvalues.size(); ++i)
    if (eig.spectrum.eigenvalues[i] > 0)
      eig_proj += eig.basis.col(static_cast<int>(i)) * eig.basis.col(static_cast<int>(i)).adjoint();
  CHECK(opnorm(formula.entries - eig_proj) < 1e-8);

  // scale invariance of the sign
  LatticeOperator scaled = lifted;
  scaled.entries *= 5.0;
  CHECK(opnorm(positive_projection_formula(scaled, 1e-8).entries - formula.entries) < 1e-12);

  // near-kernel eigenvalue: refused
  CHECK_THROWS_AS(positive_projection_formula(dirac_t2(1), 1e-8), NumericError);
}

TEST_CASE("quarter-power sandwich construction") {
  const ModeLattice two(1, 0, 2);

  // Delta = Id: A = 2P - 1 and the spectral subspace is Im P on the nose
  CMatrix p(2, 2);
  p << 1.0, 0.0, 0.0, 0.0;
  const auto P = herm_from(two, p, "P");
  const auto A = build_A_from_projection(P, identity_operator(two));
  CHECK(opnorm(A.entries - (2.0 * p - CMatrix::Identity(2, 2))) < 1e-12);
  const auto L = nonnegative_spectral_subspace(A, 1e-8, "P");
  CHECK(opnorm(L.projection.entries - p) < 1e-10);

  // rank-1 P with Delta = diag(1,4): congruence keeps the (+,-) signature
  CMatrix delta(2, 2);
  delta << 1.0, 0.0, 0.0, 4.0;
  const auto A2 = build_A_from_projection(P, herm_from(two, delta, "Delta"));
  const auto eig = eig_hermitian(A2, 1e-10);
  CHECK(eig.spectrum.eigenvalues[0] < 0.0);
  CHECK(eig.spectrum.eigenvalues[1] > 0.0);

  // Hardy projection with Delta = -d^2/dphi^2 + 1: diagonal conjugation
  // preserves the sign pattern, so the subspace is recovered exactly
  const int K = 5;
  const auto hardy = hardy_space(K);
  const auto A3 = build_A_from_projection(hardy.projection, laplacian_s1(K, 1.0));
  auto L3 = nonnegative_spectral_subspace(A3, 1e-8, "hardy");
  CHECK(relative_index(L3, hardy, 1e-9).value == 0);
  CHECK(opnorm(L3.projection.entries - hardy.projection.entries) < 1e-8);

  // Delta must be positive
  CMatrix indef(2, 2);
  indef << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(build_A_from_projection(P, herm_from(two, indef)), ContractError);
}

TEST_CASE("dimension via the spectral asymmetry") {
  const auto A = dirac_t2(2);
  const auto adm = check_admissibility(A, 1e-10);
  const auto d = d_via_eta(A, adm, 1e-9);
  CHECK(d.value == 1);
  CHECK(d.route == DRoute::Eta);

  LatticeOperator negA = A;
  negA.entries = -A.entries;
  negA.symbol = std::make_shared<SymbolSample>(map_symbol(*A.symbol, 1, [](const CMatrix& v) {
    return CMatrix(-v);
  }));
  CHECK(d_via_eta(negA, check_admissibility(negA, 1e-10), 1e-9).value == 1);

  const auto AA = direct_sum(A, A);
  CHECK(d_via_eta(AA, check_admissibility(AA, 1e-10), 1e-9).value == 2);

  // an even symbol is refused
  const auto lap = laplacian_s1(3);
  CHECK_THROWS_AS(d_via_eta(lap, check_admissibility(lap, 1e-10), 1e-9), ContractError);
}

TEST_CASE("dimension via the relative index") {
  const int K = 2;
  const auto A = dirac_t2(K);
  const auto Lp = nonnegative_spectral_subspace(A, 1e-8, "dirac:L+");
  const auto s3 = constant_fiber_multiplier(A.domain, pauli(3), "sigma3");
  const auto d = d_via_relative_index(Lp, s3, 0, 1e-6);
  CHECK(d.value == 1);
  CHECK(d.route == DRoute::RelativeIndex);

  // complement gets -1 through the same witness
  const auto Lm = complement(Lp);
  CHECK(d_via_relative_index(Lm, s3, 0, 1e-6).value == Dyadic::integer(-1));

  // finite extension shifts by one
  CHECK(d_via_relative_index(finite_rank_extend(Lp, 1), s3, 0, 1e-6).value == 2);

  // N = 1: the doubled subspace with the doubled witness halves back
  const auto s3s3 = direct_sum(s3, s3);
  CHECK(d_via_relative_index(Lp, s3s3, 1, 1e-6).value == 1);

  // witness must be even and must act on the right space
  LatticeOperator odd_witness = A;  // dirac itself is odd
  CHECK_THROWS_AS(d_via_relative_index(Lp, odd_witness, 0, 1e-6), ContractError);
  CHECK_THROWS_AS(d_via_relative_index(Lp, s3s3, 0, 1e-6), ContractError);

  // chain transport: d(sigma3 L+) = d(L-) + ind(sigma3 L+, L-) = 1
  const auto moved = map_subspace(s3, Lp, Lm.symbol_id);
  const auto dm = d_via_relative_index(Lm, s3, 0, 1e-6);
  CHECK(d_via_chain(dm, moved, Lm, 1e-6).value == 1);
}
