#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/homotopy.hpp"

using namespace oddlab;

namespace {

ProjectionPath rotation_path(double theta, int samples) {
  const ModeLattice lat(1, 0, 2);
  CMatrix P0 = CMatrix::Zero(2, 2);
  P0(0, 0) = 1.0;
  std::vector<LatticeOperator> ps;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    CMatrix R(2, 2);
    R << std::cos(t * theta), -std::sin(t * theta), std::sin(t * theta), std::cos(t * theta);
    LatticeOperator P;
    P.domain = P.codomain = lat;
    P.entries = R * P0 * R.adjoint();
    ps.push_back(std::move(P));
  }
  return ProjectionPath::uniform(std::move(ps));
}

}  // namespace

TEST_CASE("constant path transports to the identity") {
  const auto res = transport_projection_path(rotation_path(0.0, 5), 100);
  const double defect = opnorm(res.U.entries - CMatrix::Identity(2, 2));
  CHECK(defect <= 1e-10);
  CHECK(res.range_residual <= 1e-10);
}

TEST_CASE("rotating rank-1 projection transports along the rotation") {
  const double theta = std::numbers::pi / 3;
  const auto res = transport_projection_path(rotation_path(theta, 100), 100);
  CHECK(res.range_residual <= 1e-8);
  CHECK(res.unitarity_drift <= 1e-6);

  // closed form: the commutator generator integrates to the rotation itself
  CMatrix R(2, 2);
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  CHECK(opnorm(res.U.entries - R) <= 1e-6);

  // optional re-unitarization keeps the range property
  const auto res2 = transport_projection_path(rotation_path(theta, 100), 100, true);
  CHECK(res2.range_residual <= 1e-8);
  CHECK(res2.unitarity_drift <= 1e-12);
}

TEST_CASE("paths with rank jumps or bad samples are refused") {
  // linear interpolation between Hardy projections of different rank is not a
  // projection path
  const int K = 2;
  std::vector<LatticeOperator> ps;
  const auto Pa = hardy_space(K).projection;
  const auto Pb = hardy_space_from(K, 1).projection;
  for (int i = 0; i < 5; ++i) {
    const double t = i / 4.0;
    LatticeOperator P = Pa;
    P.entries = (1.0 - t) * Pa.entries + t * Pb.entries;
    ps.push_back(std::move(P));
  }
  CHECK_THROWS_AS(transport_projection_path(ProjectionPath::uniform(std::move(ps)), 100),
                  ContractError);

  // a direct rank jump between genuine projections trips the smoothness guard
  std::vector<LatticeOperator> jump{Pa, Pb};
  CHECK_THROWS_AS(transport_projection_path(ProjectionPath::uniform(std::move(jump)), 100),
                  ContractError);

  // steps must dominate the sample count
  CHECK_THROWS_AS(transport_projection_path(rotation_path(0.3, 11), 5), ContractError);
}

TEST_CASE("rotation deformation blocks") {
  const auto lat = ModeLattice(1, 1, 1);
  const auto U = constant_fiber_multiplier(lat, CMatrix::Identity(1, 1), "one");

  const auto at0 = rotation_homotopy(U, 0.0);
  CHECK(opnorm(at0.entries - CMatrix::Identity(at0.entries.rows(), at0.entries.cols())) <= 1e-14);

  // phi = pi/2 with U = Id: the rotation block is the symplectic swap
  const auto at_half = rotation_homotopy(U, std::numbers::pi / 2);
  const int n = lat.size();
  // fiber layout per mode: [id, id, block, block]
  for (int m = 0; m < n; ++m) {
    const int base = 4 * m;
    CHECK(at_half.entries(base + 0, base + 0) == cplx(1.0));
    CHECK(at_half.entries(base + 1, base + 1) == cplx(1.0));
    CHECK(std::abs(at_half.entries(base + 2, base + 2)) < 1e-15);
    CHECK(at_half.entries(base + 2, base + 3) == cplx(-1.0));
    CHECK(at_half.entries(base + 3, base + 2) == cplx(1.0));
  }

  // |det| is constant in phi
  Eigen::HouseholderQR<CMatrix> qr0(at0.entries);
  const double logdet0 = qr0.logAbsDeterminant();
  for (double phi : {0.3, 0.9, 1.4}) {
    Eigen::HouseholderQR<CMatrix> qr(rotation_homotopy(U, phi).entries);
    CHECK(std::abs(qr.logAbsDeterminant() - logdet0) <= 1e-10);
  }

  // singular U is refused
  LatticeOperator singular = U;
  singular.entries = CMatrix::Zero(n, n);
  CHECK_THROWS_AS(rotation_homotopy(singular, 0.5), ContractError);
}

TEST_CASE("metric orthogonalization of a skewed odd projection") {
  // oblique odd projection over S^1: p(+1) projects onto e1 along e1 + e2
  const ModeLattice lat(1, 3, 2);
  CMatrix p_plus(2, 2);
  p_plus << 1, -1, 0, 0;
  const CMatrix p_minus = CMatrix::Identity(2, 2) - p_plus;
  SpectralSubspace L;
  L.ambient = lat;
  L.projection = assemble_multiplier(
      lat,
      [&](const std::array<int, 2>& k) -> CMatrix { return k[0] >= 0 ? p_plus : p_minus; }, 0);
  L.symbol = std::make_shared<SymbolSample>(
      sample_symbol(CosphereGrid::circle(4), 0,
                    [&](const std::array<double, 2>&, const std::array<double, 2>& xi) {
                      return xi[0] > 0 ? p_plus : p_minus;
                    }));
  L.projection.symbol = L.symbol;
  L.orthogonal = false;
  L.symbol_id = "skewed";

  const auto res = orthogonalize_metric(L);
  CHECK(res.hermitian_residual <= 1e-10);
  CHECK(res.subspace.orthogonal);
  CHECK(res.U.parity == Parity::Even);
  REQUIRE(res.U.symbol);
  CHECK(parity_check(*res.U.symbol, Parity::Even, 1e-12).ok);
  // rank is preserved
  CHECK(res.subspace.rank() == L.rank());

  // a second pass is the identity
  const auto second = orthogonalize_metric(res.subspace);
  CHECK(opnorm(second.U.entries - CMatrix::Identity(lat.size(), lat.size())) <= 1e-10);

  // already-orthogonal subspaces are untouched
  const auto hardy = hardy_space(3);
  const auto id_res = orthogonalize_metric(hardy);
  CHECK(opnorm(id_res.U.entries - CMatrix::Identity(hardy.ambient.size(), hardy.ambient.size())) <=
        1e-12);

  // subspaces without a symbol sample cannot be orthogonalized this way
  SpectralSubspace no_symbol = L;
  no_symbol.symbol = nullptr;
  CHECK_THROWS_AS(orthogonalize_metric(no_symbol), ContractError);
}
