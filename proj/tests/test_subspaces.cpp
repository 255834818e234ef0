#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/subspaces.hpp"

using namespace oddlab;

namespace {

LatticeOperator diag_op(const ModeLattice& lat, std::function<double(int)> f) {
  LatticeOperator op;
  op.domain = op.codomain = lat;
  op.entries = CMatrix::Zero(lat.size(), lat.size());
  for (int i = 0; i < lat.size(); ++i) op.entries(i, i) = f(i);
  return op;
}

}  // namespace

TEST_CASE("nonnegative spectral subspace") {
  const ModeLattice two(1, 0, 2);
  const auto A = diag_op(two, [](int i) { return i == 0 ? -1.0 : 1.0; });
  const auto L = nonnegative_spectral_subspace(A, 1e-8, "pm");
  CHECK(std::abs(L.projection.entries(0, 0)) < 1e-12);
  CHECK(std::abs(L.projection.entries(1, 1) - 1.0) < 1e-12);
  CHECK(L.rank() == 1);
  CHECK(L.orthogonal);

  // the truncated Hardy space from -i d/dphi
  const int K = 3;
  const auto hardy = nonnegative_spectral_subspace(momentum_s1(K), 1e-8, "hardy");
  for (int k = -K; k <= K; ++k)
    CHECK(std::abs(hardy.projection.entries(k + K, k + K).real() - (k >= 0 ? 1.0 : 0.0)) < 1e-12);
  // the declared symbol came out as the 0/1 Hardy table
  REQUIRE(hardy.symbol);
  CHECK(odd_projection_check(*hardy.symbol, 1e-12).ok);

  // Dirac on T^2: rank is half the nonzero spectrum plus the flat kernel
  const int Kd = 2;
  const auto Lp = nonnegative_spectral_subspace(dirac_t2(Kd), 1e-8, "dirac:L+");
  const int M = (2 * Kd + 1) * (2 * Kd + 1);
  CHECK(Lp.rank() == M + 1);

  // non-Hermitian input is refused
  LatticeOperator bad;
  bad.domain = bad.codomain = two;
  bad.entries = CMatrix::Zero(2, 2);
  bad.entries(0, 1) = 1.0;
  CHECK_THROWS_AS(nonnegative_spectral_subspace(bad, 1e-8, "x"), ContractError);
}

TEST_CASE("finite rank extension is deterministic and mode-adjacent for Hardy") {
  const int K = 4;
  const auto hardy = hardy_space(K);
  const auto same = finite_rank_extend(hardy, 0);
  CHECK((same.projection.entries - hardy.projection.entries).norm() == 0.0);

  const auto plus1 = finite_rank_extend(hardy, 1);
  CHECK(plus1.rank() - hardy.rank() == 1);
  // the added direction is the k = -1 mode, the highest flat index in the
  // complement under the documented enumeration
  CHECK(std::abs(plus1.projection.entries(K - 1, K - 1).real() - 1.0) < 1e-12);
  CHECK(std::abs(plus1.projection.entries(0, 0).real()) < 1e-12);  // k = -K untouched
  CHECK(plus1.symbol_id == hardy.symbol_id);
  CHECK(plus1.provenance.back().find("finite-modification-of:hardy") != std::string::npos);

  const auto plus2 = finite_rank_extend(hardy, 2);
  CHECK(plus2.rank() - hardy.rank() == 2);

  // capacity: the complement has K directions
  CHECK_THROWS_AS(finite_rank_extend(hardy, K + 1), ContractError);
}

TEST_CASE("complement is an exact involution") {
  const auto hardy = hardy_space(3);
  const auto co = complement(hardy);
  for (int k = -3; k <= 3; ++k)
    CHECK(std::abs(co.projection.entries(k + 3, k + 3).real() - (k < 0 ? 1.0 : 0.0)) < 1e-12);
  CHECK(co.symbol_id == "hardy^perp");
  const auto back = complement(co);
  CHECK((back.projection.entries - hardy.projection.entries).norm() == 0.0);
  CHECK(back.symbol_id == "hardy");

  // Dirac complement is the strictly negative subspace
  const auto Lp = nonnegative_spectral_subspace(dirac_t2(1), 1e-8, "dirac:L+");
  const auto Lm = complement(Lp);
  const auto eigvals = Eigen::SelfAdjointEigenSolver<CMatrix>(
                           (dirac_t2(1).entries + dirac_t2(1).entries.adjoint()) / 2.0)
                           .eigenvalues();
  int strictly_negative = 0;
  for (int i = 0; i < eigvals.size(); ++i)
    if (eigvals(i) < -1e-8) ++strictly_negative;
  CHECK(Lm.rank() == strictly_negative);

  SpectralSubspace oblique = hardy;
  oblique.orthogonal = false;
  CHECK_THROWS_AS(complement(oblique), ContractError);
}

TEST_CASE("relative index: trace route with rank-route cross-check") {
  const int K = 5;
  const auto hardy = hardy_space(K);
  CHECK(relative_index(hardy, hardy, 1e-9).value == 0);

  for (int k = 1; k <= 3; ++k)
    CHECK(relative_index(finite_rank_extend(hardy, k), hardy, 1e-9).value == k);

  CHECK(relative_index(hardy_space_from(K, 1), hardy_space_from(K, 0), 1e-9).value == -1);

  // antisymmetry and additivity along a chain, exactly on integers
  const auto L1 = finite_rank_extend(hardy, 1);
  const auto L2 = finite_rank_extend(hardy, 3);
  CHECK(relative_index(L1, hardy, 1e-9).value == -relative_index(hardy, L1, 1e-9).value);
  CHECK(relative_index(L1, L2, 1e-9).value + relative_index(L2, hardy, 1e-9).value ==
        relative_index(L1, hardy, 1e-9).value);

  // incomparable symbols are refused
  SpectralSubspace other = hardy;
  other.symbol_id = "other";
  CHECK_THROWS_AS(relative_index(hardy, other, 1e-9), ContractError);
}

TEST_CASE("negated operator gives the complement up to the kernel") {
  const auto A = dirac_t2(2);
  LatticeOperator negA = A;
  negA.entries = -A.entries;
  const auto Lp = nonnegative_spectral_subspace(A, 1e-8, "dirac:L+");
  auto LpNeg = nonnegative_spectral_subspace(negA, 1e-8, "dirac:L+^perp");
  const auto Lm = complement(Lp);
  const auto rel = relative_index(LpNeg, Lm, 1e-9);
  CHECK(rel.value == kernel_dim(A, 1e-8));
}

TEST_CASE("swap operator") {
  const ModeLattice two(1, 0, 2);

  // Q = P reduces to the identity
  const auto P = diag_op(two, [](int i) { return i == 0 ? 1.0 : 0.0; });
  const auto same = swap_operator(P, P);
  CHECK((same.op.entries - CMatrix::Identity(4, 4)).norm() < 1e-14);
  CHECK(!same.singular);

  // rank-1 projections at angle pi/6: invertible, carries Im P into Im Q + rest
  const double th = std::numbers::pi / 6;
  CMatrix q(2, 2);
  q << std::cos(th) * std::cos(th), std::cos(th) * std::sin(th), std::cos(th) * std::sin(th),
      std::sin(th) * std::sin(th);
  LatticeOperator Q;
  Q.domain = Q.codomain = two;
  Q.entries = q;
  const auto rot = swap_operator(P, Q);
  CHECK(!rot.singular);
  CHECK(rot.smin > 0.1);
  // first summand of D'(u, 0) lands in Im Q for u in Im P
  CVector u = CVector::Zero(4);
  u(0) = 1.0;  // (e1, 0) in the fiber-interleaved doubled space
  const CVector image = rot.op.entries * u;
  CVector first(2), second(2);
  first << image(0), image(1);
  second << image(2), image(3);
  CHECK(((CMatrix::Identity(2, 2) - q) * first).norm() < 1e-12);
  CHECK((q * second).norm() < 1e-12);

  // conjugation consistency: D' (P + (1-P)) D'^-1 = Q + (1-Q), built in the
  // interleaved layout via direct_sum
  LatticeOperator Pc = P;
  Pc.entries = CMatrix::Identity(2, 2) - P.entries;
  LatticeOperator Qc = Q;
  Qc.entries = CMatrix::Identity(2, 2) - q;
  const auto Pblock = direct_sum(P, Pc);
  const auto Qblock = direct_sum(Q, Qc);
  const CMatrix lhs = rot.op.entries * Pblock.entries;
  const CMatrix rhs = Qblock.entries * rot.op.entries;
  CHECK(opnorm(lhs - rhs) < 1e-12);

  // orthogonal ranges: the direct transport block degenerates
  const auto Qperp = diag_op(two, [](int i) { return i == 1 ? 1.0 : 0.0; });
  const auto far = swap_operator(P, Qperp);
  CHECK(far.projection_gap == doctest::Approx(1.0));
  CHECK(far.transport_smin < 1e-12);
  CHECK(far.singular);

  // non-idempotent inputs are refused
  auto NotP = P;
  NotP.entries *= 2.0;
  CHECK_THROWS_AS(swap_operator(NotP, P), ContractError);
}

TEST_CASE("conjugation consistency for moderately separated projections") {
  std::mt19937_64 rng(31);
  const ModeLattice lat(1, 1, 2);  // 6-dim ambient
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix u = random_unitary(6, rng);
    CMatrix p = CMatrix::Zero(6, 6);
    for (int i = 0; i < 3; ++i) p += u.col(i) * u.col(i).adjoint();
    // small rotation of the same subspace keeps ||P - Q|| <= 0.5
    const CMatrix g = random_matrix(6, 6, rng);
    const CMatrix h = (g - g.adjoint()) / 8.0;
    const CMatrix expm = (CMatrix::Identity(6, 6) + h + h * h / 2.0 + h * h * h / 6.0);
    Eigen::HouseholderQR<CMatrix> qr(expm);
    const CMatrix v = qr.householderQ();
    LatticeOperator P, Q;
    P.domain = P.codomain = Q.domain = Q.codomain = lat;
    P.entries = p;
    Q.entries = v * p * v.adjoint();
    const auto sw = swap_operator(P, Q);
    if (sw.projection_gap > 0.5) continue;
    LatticeOperator Pc = P, Qc = Q;
    Pc.entries = CMatrix::Identity(6, 6) - P.entries;
    Qc.entries = CMatrix::Identity(6, 6) - Q.entries;
    const CMatrix lhs = sw.op.entries * direct_sum(P, Pc).entries;
    const CMatrix rhs = direct_sum(Q, Qc).entries * sw.op.entries;
    CHECK(opnorm(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("map_subspace tracks provenance and detects orthogonality") {
  const auto Lp = nonnegative_spectral_subspace(dirac_t2(1), 1e-8, "dirac:L+");
  const auto s3 = constant_fiber_multiplier(Lp.ambient, pauli(3), "sigma3");
  const auto moved = map_subspace(s3, Lp, "dirac:L+^perp");
  CHECK(moved.orthogonal);  // sigma3 is unitary
  CHECK(moved.rank() == Lp.rank());
  CHECK(moved.symbol_id == "dirac:L+^perp");

  // a genuinely oblique image is flagged non-orthogonal
  CMatrix c(2, 2);
  c << 1.0, 0.7, 0.0, 1.0;
  const auto cop = constant_fiber_multiplier(Lp.ambient, c, "C");
  const auto skew = map_subspace(cop, Lp, "dirac:L+@C");
  CHECK(!skew.orthogonal);
  CHECK(skew.rank() == Lp.rank());

  LatticeOperator singular;
  singular.domain = singular.codomain = Lp.ambient;
  singular.entries = CMatrix::Zero(Lp.ambient.size(), Lp.ambient.size());
  CHECK_THROWS_AS(map_subspace(singular, Lp, "x"), ContractError);
}

TEST_CASE("power direct sum") {
  const auto hardy = hardy_space(2);
  const auto doubled = power_direct_sum(hardy, 2);
  CHECK(doubled.ambient.r == 2);
  CHECK(doubled.rank() == 2 * hardy.rank());
  const auto quadrupled = power_direct_sum(hardy, 4);
  CHECK(quadrupled.rank() == 4 * hardy.rank());
}
