#include "oddlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <ostream>
#include <set>

#include "oddlab/builtins.hpp"
#include "oddlab/errors.hpp"
#include "oddlab/homotopy.hpp"
#include "oddlab/index.hpp"
#include "oddlab/parallel.hpp"
#include "oddlab/version.hpp"

namespace oddlab {

json dyadic_to_json(const Dyadic& d) { return json{{"num", d.num}, {"log2_den", d.log2_den}}; }

namespace {

json residuals_to_json(const std::vector<NamedResidual>& rs) {
  json arr = json::array();
  for (const auto& r : rs) arr.push_back({{"name", r.name}, {"value", r.value}, {"tol", r.tol}});
  return arr;
}

json index_report_to_json(const IndexReport& rep) {
  json terms = json::object();
  for (const auto& [name, term] : rep.rhs_terms) terms[name] = dyadic_to_json(term);
  return json{{"kind", "index"},
              {"name", rep.name},
              {"lhs", rep.lhs},
              {"rhs_terms", terms},
              {"rhs_total", dyadic_to_json(rep.rhs_total)},
              {"residuals", residuals_to_json(rep.residuals)},
              {"pass", rep.pass},
              {"provenance", rep.provenance}};
}

json eta_to_json(const EtaResult& eta) {
  return json{{"kind", "eta"},
              {"value", eta.value},
              {"exact_value", dyadic_to_json(eta.exact_value())},
              {"kernel_dim", eta.kernel_count},
              {"symmetric_pairs", eta.symmetric_pairs},
              {"unpaired", eta.unpaired},
              {"ambiguous_pairs", eta.ambiguous_pairs},
              {"exact", eta.exact}};
}

json dimension_to_json(const DimensionResult& d) {
  return json{{"kind", "dimension"},
              {"value", dyadic_to_json(d.value)},
              {"route", d.route == DRoute::Eta ? "eta" : "relative-index"},
              {"witness", d.witness}};
}

json predicate_payload(bool ok, json details) {
  details["kind"] = "predicate";
  details["ok"] = ok;
  return details;
}

// ---------------------------------------------------------------------------
// Shared instance builders
// ---------------------------------------------------------------------------

struct DiracFamily {
  LatticeOperator A;
  SpectralSubspace Lp, Lm;
  LatticeOperator sigma3;
  DimensionResult d_plus, d_minus;
};

DiracFamily make_dirac_family(int K, const Tolerances& tol) {
  DiracFamily f{dirac_t2(K), {}, {}, {}, {}, {}};
  f.Lp = nonnegative_spectral_subspace(f.A, tol.rank_tol, "dirac:L+");
  f.Lm = complement(f.Lp);
  f.sigma3 = constant_fiber_multiplier(f.A.domain, pauli(3), "sigma3");
  f.d_plus = d_via_relative_index(f.Lp, f.sigma3, 0, 1e-6);
  f.d_minus = d_via_relative_index(f.Lm, f.sigma3, 0, 1e-6);
  return f;
}

struct SelectorFamily {
  LatticeOperator D, A, P0, P0_tilde;
  SpectralSubspace Lplus;
  DimensionResult dL;
};

SelectorFamily make_selector_family(const LatticeOperator& D, const Tolerances& tol) {
  SelectorFamily f{D, hamiltonian_from_D(D), {}, {}, {}, {}};
  f.Lplus = nonnegative_spectral_subspace(f.A, tol.rank_tol, "L+(" + f.A.label + ")");
  f.P0 = second_summand_selector(D.domain, D.codomain);
  f.P0_tilde = direct_sum(multiplier_polar_phase(D, tol.rank_tol), identity_operator(D.codomain));
  f.P0_tilde.label = "P0~(" + D.label + ")";
  f.dL = d_via_eta(f.A, check_admissibility(f.A, tol.sym_tol), tol.pair_tol, tol.sym_tol);
  return f;
}

using CheckFn = std::function<json(const ExperimentConfig&, bool& pass)>;

// ---------------------------------------------------------------------------
// hardy-symbol
// ---------------------------------------------------------------------------

json check_hardy_symbol_table(const ExperimentConfig& cfg, bool& pass) {
  const auto sym = hardy_symbol(default_grid(1));
  double table_defect = 0.0;
  for (int b = 0; b < sym.grid->base_count(); ++b) {
    table_defect = std::max(table_defect, std::abs(sym.at(b, 0)(0, 0) - 1.0));  // xi = +1
    table_defect = std::max(table_defect, std::abs(sym.at(b, 1)(0, 0)));        // xi = -1
  }
  const auto pc = odd_projection_check(sym, cfg.tol.sym_tol);
  pass = table_defect == 0.0 && pc.ok;
  return predicate_payload(pass, {{"table_defect", table_defect},
                                  {"idempotency", pc.idempotency_residual},
                                  {"oddness", pc.oddness_residual}});
}

json check_hardy_from_momentum(const ExperimentConfig& cfg, bool& pass) {
  const int K = cfg.truncation;
  const auto L = nonnegative_spectral_subspace(momentum_s1(K), cfg.tol.rank_tol, "hardy");
  const auto direct = hardy_space(K);
  const double projection_gap = opnorm(L.projection.entries - direct.projection.entries);
  const auto comp = complement(direct);
  double comp_defect = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double want = k < 0 ? 1.0 : 0.0;
    comp_defect = std::max(comp_defect,
                           std::abs(comp.projection.entries(k + K, k + K).real() - want));
  }
  pass = projection_gap <= 1e-12 && comp_defect == 0.0;
  return predicate_payload(pass, {{"projection_gap", projection_gap}, {"complement_defect", comp_defect}});
}

json check_pullback_involution(const ExperimentConfig&, bool& pass) {
  const auto pauli_s = pauli_symbol(default_grid(2));
  const auto twice = pullback_alpha(pullback_alpha(pauli_s));
  double involution = 0.0;
  for (size_t i = 0; i < pauli_s.values.size(); ++i)
    involution = std::max(involution, (twice.values[i] - pauli_s.values[i]).norm());
  // odd linear symbol flips sign under the pullback
  const auto flipped = pullback_alpha(pauli_s);
  double flip = 0.0;
  for (size_t i = 0; i < pauli_s.values.size(); ++i)
    flip = std::max(flip, (flipped.values[i] + pauli_s.values[i]).norm());
  pass = involution == 0.0 && flip <= 1e-15;
  return predicate_payload(pass, {{"involution_defect", involution}, {"sign_flip_defect", flip}});
}

json check_parity_residuals(const ExperimentConfig&, bool& pass) {
  const auto pauli_s = pauli_symbol(default_grid(2));
  const auto odd = parity_check(pauli_s, Parity::Odd, 1e-12);
  const auto even = parity_check(pauli_s, Parity::Even, 1e-12);
  pass = odd.ok && !even.ok && std::abs(even.residual - 2.0) <= 1e-12;
  return predicate_payload(pass, {{"odd_residual", odd.residual}, {"even_residual", even.residual}});
}

// ---------------------------------------------------------------------------
// hardy-toeplitz
// ---------------------------------------------------------------------------

json toeplitz_instance(int K, int n, double rank_tol, bool& pass) {
  const auto L = hardy_space(K);
  const auto rep = toeplitz_formula_check(shift_s1(K, n), L, L, rank_tol);
  pass = rep.pass && rep.lhs == -n;
  json j = index_report_to_json(rep);
  j["expected_lhs"] = -n;
  return j;
}

json check_toeplitz_n(const ExperimentConfig& cfg, int n, bool& pass) {
  bool p1 = false, p2 = false;
  json a = toeplitz_instance(cfg.truncation, n, cfg.tol.rank_tol, p1);
  json b = toeplitz_instance(cfg.truncation + 1, n, cfg.tol.rank_tol, p2);  // truncation stability
  pass = p1 && p2 && a["lhs"] == b["lhs"];
  return json{{"kind", "pair"}, {"at_K", a}, {"at_K_plus_1", b}};
}

json check_toeplitz_extension(const ExperimentConfig& cfg, bool& pass) {
  const int K = cfg.truncation;
  const auto L1 = hardy_space(K);
  const auto L2 = finite_rank_extend(L1, 2);
  const auto rep = toeplitz_formula_check(constant_fiber_multiplier(L1.ambient, CMatrix::Identity(1, 1), "id"),
                                          L1, L2, cfg.tol.rank_tol);
  pass = rep.pass && rep.lhs == -2;
  return index_report_to_json(rep);
}

json check_relative_index_chain(const ExperimentConfig& cfg, bool& pass) {
  const int K = cfg.truncation;
  // antisymmetry and additivity along a chain of finite modifications
  const auto L = hardy_space(K);
  const auto L1 = finite_rank_extend(L, 1);
  const auto L3 = finite_rank_extend(L, 3);
  const long i_ab = relative_index(L1, L, 1e-9).value;
  const long i_ba = relative_index(L, L1, 1e-9).value;
  const long i_ac = relative_index(L1, L3, 1e-9).value;
  const long i_cb = relative_index(L3, L, 1e-9).value;
  const long hardy1_vs_hardy = relative_index(hardy_space_from(K, 1), hardy_space_from(K, 0), 1e-9).value;
  pass = i_ab == 1 && i_ba == -1 && i_ac + i_cb == i_ab && hardy1_vs_hardy == -1;
  return predicate_payload(pass, {{"ind_extend1_vs_base", i_ab},
                                  {"ind_base_vs_extend1", i_ba},
                                  {"chain_sum", i_ac + i_cb},
                                  {"hardy_k_ge_1_vs_k_ge_0", hardy1_vs_hardy}});
}

// ---------------------------------------------------------------------------
// dirac-eta
// ---------------------------------------------------------------------------

json check_dirac_spectrum_frozen(const ExperimentConfig& cfg, bool& pass) {
  // K = 1 oracle: eigenvalues of k.sigma over the 9 modes, fiber rank 2.
  const auto eig = eig_hermitian(dirac_t2(1), cfg.tol.rank_tol);
  std::vector<double> expected;
  for (int k1 = -1; k1 <= 1; ++k1)
    for (int k2 = -1; k2 <= 1; ++k2) {
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      expected.push_back(-r);
      expected.push_back(r);
    }
  std::sort(expected.begin(), expected.end());
  double defect = 0.0;
  for (size_t i = 0; i < expected.size(); ++i)
    defect = std::max(defect, std::abs(expected[i] - eig.spectrum.eigenvalues[i]));
  pass = defect <= 1e-12 && eig.spectrum.kernel_dim == 2;
  return predicate_payload(pass, {{"spectrum_defect", defect}, {"kernel_dim", eig.spectrum.kernel_dim}});
}

json check_dirac_eta_value(const ExperimentConfig& cfg, bool& pass) {
  const auto A = dirac_t2(cfg.truncation);
  const auto eta = eta_invariant(A, cfg.tol.pair_tol);
  LatticeOperator negA = A;
  negA.entries = -A.entries;
  const auto eta_neg = eta_invariant(negA, cfg.tol.pair_tol);
  pass = eta.exact_value() == 1 && eta.unpaired.empty() && eta_neg.exact_value() == 1;
  json j = eta_to_json(eta);
  j["eta_of_negative"] = dyadic_to_json(eta_neg.exact_value());
  return j;
}

json check_eta_asymmetric_triple(const ExperimentConfig& cfg, bool& pass) {
  LatticeOperator A = assemble_multiplier(
      ModeLattice(1, 1, 1),
      [](const std::array<int, 2>& k) {
        CMatrix v(1, 1);
        v(0, 0) = static_cast<double>(k[0]) + 2.0;  // diag(1, 2, 3)
        return v;
      },
      0, Parity::None, nullptr, "diag(1,2,3)");
  const auto eta = eta_invariant(A, cfg.tol.pair_tol);
  pass = eta.exact_value() == Dyadic(3, 1) && eta.unpaired.size() == 3;
  return eta_to_json(eta);
}

json check_eta_hamiltonian_random(const ExperimentConfig& cfg, bool& pass) {
  std::mt19937_64 rng(cfg.seed);
  pass = true;
  json cases = json::array();
  for (int trial = 0; trial < 3; ++trial) {
    // random scalar multiplier on T^2 with a deterministic sprinkling of zeros
    const int K = 2;
    std::vector<cplx> values(ModeLattice(2, K, 1).mode_count());
    int zeros = 0;
    for (auto& v : values) {
      if (rand_unit(rng) < 0.2) {
        v = 0.0;
        ++zeros;
      } else {
        v = cplx(0.5 + rand_unit(rng), rand_unit(rng) - 0.5);
      }
    }
    const ModeLattice lat(2, K, 1);
    LatticeOperator D = assemble_multiplier(
        lat,
        [&](const std::array<int, 2>& k) {
          CMatrix v(1, 1);
          v(0, 0) = values[lat.mode_index(k)];
          return v;
        },
        0, Parity::None, nullptr, "random-multiplier");
    const auto A = hamiltonian_from_D(D);
    const auto eta = eta_invariant(A, cfg.tol.pair_tol);
    const long ind = analytic_index(D, cfg.tol.rank_tol);
    const int dk = kernel_dim(D, cfg.tol.rank_tol);
    const Dyadic expected = Dyadic(-ind, 1) + Dyadic::integer(dk);
    const bool ok = eta.exact_value() == expected && dk == zeros;
    pass = pass && ok;
    cases.push_back({{"eta", dyadic_to_json(eta.exact_value())},
                     {"expected", dyadic_to_json(expected)},
                     {"dim_ker", dk},
                     {"ok", ok}});
  }
  return json{{"kind", "predicate"}, {"ok", pass}, {"cases", cases}};
}

json check_d_eta_dirac(const ExperimentConfig& cfg, bool& pass) {
  const auto A = dirac_t2(cfg.truncation);
  const auto d = d_via_eta(A, check_admissibility(A, cfg.tol.sym_tol), cfg.tol.pair_tol, cfg.tol.sym_tol);
  const auto doubled = direct_sum(A, A);
  const auto d2 = d_via_eta(doubled, check_admissibility(doubled, cfg.tol.sym_tol), cfg.tol.pair_tol,
                            cfg.tol.sym_tol);
  pass = d.value == 1 && d2.value == 2;
  json j = dimension_to_json(d);
  j["doubled"] = dimension_to_json(d2);
  return j;
}

// ---------------------------------------------------------------------------
// dirac-d-equality
// ---------------------------------------------------------------------------

json check_d_equality_at(int K, const Tolerances& tol, bool& pass) {
  const auto f = make_dirac_family(K, tol);
  const auto via_eta = d_via_eta(f.A, check_admissibility(f.A, tol.sym_tol), tol.pair_tol, tol.sym_tol);
  pass = via_eta.value == f.d_plus.value && via_eta.value == 1;
  return json{{"kind", "pair"},
              {"via_eta", dimension_to_json(via_eta)},
              {"via_relative_index", dimension_to_json(f.d_plus)}};
}

// ---------------------------------------------------------------------------
// thmn-properties
// ---------------------------------------------------------------------------

json check_relative_dimension_property(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  pass = true;
  json cases = json::array();
  for (int k = 1; k <= 3; ++k) {
    const auto Lk = finite_rank_extend(f.Lp, k);
    const auto dk = d_via_relative_index(Lk, f.sigma3, 0, 1e-6);
    const long rel = relative_index(Lk, f.Lp, 1e-9).value;
    const bool ok = (dk.value - f.d_plus.value) == Dyadic::integer(k) && rel == k;
    pass = pass && ok;
    cases.push_back({{"k", k}, {"d_extended", dyadic_to_json(dk.value)}, {"relative_index", rel}, {"ok", ok}});
  }
  return json{{"kind", "predicate"}, {"ok", pass}, {"cases", cases}, {"d_base", dyadic_to_json(f.d_plus.value)}};
}

json check_complement_property(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const Dyadic sum = f.d_plus.value + f.d_minus.value;
  pass = sum == 0 && f.d_plus.value == 1 && f.d_minus.value == Dyadic::integer(-1);
  return json{{"kind", "predicate"},
              {"ok", pass},
              {"d_plus", dyadic_to_json(f.d_plus.value)},
              {"d_minus", dyadic_to_json(f.d_minus.value)},
              {"sum", dyadic_to_json(sum)}};
}

json check_invariance_property(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  std::mt19937_64 rng(cfg.seed);
  pass = true;
  json cases = json::array();
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix c = random_well_conditioned(2, rng, 1e3);
    const auto C = constant_fiber_multiplier(f.A.domain, c, "C" + std::to_string(trial));
    CMatrix cinv = c.inverse();
    const auto Uprime = constant_fiber_multiplier(f.A.domain, c * pauli(3) * cinv,
                                                  "C s3 C^-1 (" + std::to_string(trial) + ")");
    const std::string tag = "@C" + std::to_string(trial);
    const auto CLp = map_subspace(C, f.Lp, "dirac:L+" + tag);
    const auto CLm = map_subspace(C, f.Lm, "dirac:L-" + tag);
    const auto d = d_via_relative_index(CLp, Uprime, 0, 1e-6, &CLm);
    const bool ok = d.value == f.d_plus.value;
    pass = pass && ok;
    cases.push_back({{"trial", trial}, {"d", dyadic_to_json(d.value)}, {"ok", ok}});
  }
  return json{{"kind", "predicate"}, {"ok", pass}, {"cases", cases}};
}

// ---------------------------------------------------------------------------
// oba-suite
// ---------------------------------------------------------------------------

json check_oba_identity(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const auto D = constant_fiber_multiplier(f.A.domain, CMatrix::Identity(2, 2), "id");
  const auto Dt = direct_sum(D, alpha_conjugate_multiplier(D));
  const auto rep =
      subspace_index_formula_check(D, f.Lp, f.Lp, Dt, f.d_plus, f.d_plus, cfg.tol.rank_tol, "oba-identity");
  pass = rep.pass && rep.lhs == 0;
  return index_report_to_json(rep);
}

json check_oba_sigma3(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const auto L2 = map_subspace(f.sigma3, f.Lp, f.Lm.symbol_id);
  const auto d2 = d_via_chain(f.d_minus, L2, f.Lm, 1e-6);
  const auto Dt = direct_sum(f.sigma3, alpha_conjugate_multiplier(f.sigma3));
  const auto rep =
      subspace_index_formula_check(f.sigma3, f.Lp, L2, Dt, f.d_plus, d2, cfg.tol.rank_tol, "oba-sigma3");
  pass = rep.pass && rep.lhs == 0 && d2.value == 1;
  json j = index_report_to_json(rep);
  j["d_sigma3_L"] = dimension_to_json(d2);
  return j;
}

json check_oba_finite_extension(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const auto L2 = finite_rank_extend(f.Lp, 1);
  const auto d2 = d_via_relative_index(L2, f.sigma3, 0, 1e-6);
  const auto D = constant_fiber_multiplier(f.A.domain, CMatrix::Identity(2, 2), "id");
  const auto Dt = direct_sum(D, alpha_conjugate_multiplier(D));
  const auto rep = subspace_index_formula_check(D, f.Lp, L2, Dt, f.d_plus, d2, cfg.tol.rank_tol,
                                                "oba-finite-extension");
  pass = rep.pass && rep.lhs == -1;
  return index_report_to_json(rep);
}

json check_half_index_identity(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const auto D = constant_fiber_multiplier(f.A.domain, CMatrix::Identity(2, 2), "id");
  const auto rep = half_index_check(D, f.Lp, cfg.tol.rank_tol, "half-index-identity");
  pass = rep.pass && rep.lhs == 0;
  return index_report_to_json(rep);
}

json check_half_index_conjugate_zeros(const ExperimentConfig& cfg, bool& pass) {
  const int K = std::max(2, cfg.truncation);
  const ModeLattice lat(2, K, 1);
  // even scalar multiplier (k1 + i k2)^2 - 1 with the single conjugate zero
  // pair k = (+-1, 0)
  auto a = [](const std::array<int, 2>& k) {
    CMatrix v(1, 1);
    const cplx z(static_cast<double>(k[0]), static_cast<double>(k[1]));
    v(0, 0) = z * z - 1.0;
    return v;
  };
  auto sym = std::make_shared<SymbolSample>(sample_symbol(
      default_grid(2), 2, [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
        CMatrix v(1, 1);
        const cplx z(xi[0], xi[1]);
        v(0, 0) = z * z;
        return v;
      }));
  const auto D = assemble_multiplier(lat, a, 2, Parity::Even, sym, "(k1+ik2)^2-1");
  const auto rep = half_index_check(D, halfspace_t2(K), cfg.tol.rank_tol, "half-index-conjugate-zeros");
  pass = rep.pass && rep.lhs == 0;
  return index_report_to_json(rep);
}

json check_half_index_dirac_squared(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(cfg.truncation, cfg.tol);
  const auto D2 = compose(f.A, f.A);
  LatticeOperator D = D2;
  // lift the k = 0 kernel with the projector onto that mode
  const int m0 = f.A.domain.mode_index({0, 0});
  D.entries.block(m0 * 2, m0 * 2, 2, 2) += CMatrix::Identity(2, 2);
  D.parity = Parity::Even;
  D.label = "dirac^2+kernel-lift";
  const auto rep = half_index_check(D, f.Lp, cfg.tol.rank_tol, "half-index-dirac-squared");
  pass = rep.pass && rep.lhs == 0;
  return index_report_to_json(rep);
}

// ---------------------------------------------------------------------------
// gladk-suite
// ---------------------------------------------------------------------------

json check_gladk_selector(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_selector_family(dbar_t2(cfg.truncation), cfg.tol);
  const auto rep =
      subspace_to_space_index_check(f.P0, f.Lplus, f.P0_tilde, f.dL, cfg.tol.rank_tol, "gladk-selector");
  pass = rep.pass && rep.lhs == 1;
  return index_report_to_json(rep);
}

json check_gladk_doubled(const ExperimentConfig& cfg, bool& pass) {
  const auto D = dbar_t2(cfg.truncation);
  const auto f = make_selector_family(direct_sum(D, D), cfg.tol);
  const auto rep =
      subspace_to_space_index_check(f.P0, f.Lplus, f.P0_tilde, f.dL, cfg.tol.rank_tol, "gladk-doubled");
  pass = rep.pass && rep.lhs == 2 && f.dL.value == 2;
  return index_report_to_json(rep);
}

json check_gladk_extended(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_selector_family(dbar_t2(cfg.truncation), cfg.tol);
  const auto Lext = finite_rank_extend(f.Lplus, 1);
  DimensionResult dext;
  dext.value = f.dL.value + Dyadic::integer(relative_index(Lext, f.Lplus, 1e-9).value);
  dext.route = DRoute::RelativeIndex;
  dext.witness = "d(L) + ind(L+1, L); base: " + f.dL.witness;
  const auto rep =
      subspace_to_space_index_check(f.P0, Lext, f.P0_tilde, dext, cfg.tol.rank_tol, "gladk-extended");
  pass = rep.pass && rep.lhs == 2;
  return index_report_to_json(rep);
}

// ---------------------------------------------------------------------------
// example6
// ---------------------------------------------------------------------------

json check_example6_at(int K, const Tolerances& tol, bool& pass) {
  const auto rep = hamiltonian_selector_verify(dbar_t2(K), tol.rank_tol);
  pass = rep.pass && rep.lhs == 1;
  return index_report_to_json(rep);
}

json check_example6_invertible(const ExperimentConfig& cfg, bool& pass) {
  const auto rep = hamiltonian_selector_verify(dbar_t2(cfg.truncation, 5.0), cfg.tol.rank_tol);
  pass = rep.pass && rep.lhs == 0;
  return index_report_to_json(rep);
}

json check_example6_degenerate(const ExperimentConfig&, bool& pass) {
  // D = 0 on the one-mode lattice: everything is kernel, and the identities
  // still close exactly.
  LatticeOperator D = zero_operator(ModeLattice(1, 0, 1), ModeLattice(1, 0, 1));
  D.label = "zero";
  const auto rep = hamiltonian_selector_verify(D, 1e-8);
  pass = rep.pass && rep.lhs == 1;
  return index_report_to_json(rep);
}

// ---------------------------------------------------------------------------
// clifford-oddness
// ---------------------------------------------------------------------------

json check_pauli_odd_projection(const ExperimentConfig& cfg, bool& pass) {
  const auto grid = default_grid(2);
  const auto proj = positive_symbol_projection(pauli_symbol(grid), 1e-10);
  const auto pc = odd_projection_check(proj, cfg.tol.sym_tol);
  // closed form (Id + xi.sigma)/2 on the unit cosphere
  double closed_form_defect = 0.0;
  for (int b = 0; b < grid->base_count(); ++b)
    for (int c = 0; c < grid->codirection_count(); ++c) {
      const auto& xi = grid->codirections[c];
      const CMatrix expected =
          (CMatrix::Identity(2, 2) + xi[0] * pauli(1) + xi[1] * pauli(2)) / 2.0;
      closed_form_defect = std::max(closed_form_defect, opnorm(proj.at(b, c) - expected));
    }
  pass = pc.ok && closed_form_defect <= 1e-12;
  return predicate_payload(pass, {{"idempotency", pc.idempotency_residual},
                                  {"oddness", pc.oddness_residual},
                                  {"closed_form_defect", closed_form_defect}});
}

json check_clifford_oddness(const ExperimentConfig& cfg, int N, bool& pass) {
  const auto grid = default_grid(2);
  const auto cl = clifford_symbol(N, grid);
  double herm = 0.0, square = 0.0, linear = 0.0;
  const CMatrix id = CMatrix::Identity(1 << N, 1 << N);
  for (int b = 0; b < grid->base_count(); ++b)
    for (int c = 0; c < grid->codirection_count(); ++c) {
      const CMatrix& v = cl.at(b, c);
      herm = std::max(herm, opnorm(v - v.adjoint()));
      square = std::max(square, opnorm(v * v - id));  // |xi| = 1 on the grid
      linear = std::max(linear, opnorm(v + cl.at(b, grid->antipode[c])));
    }
  const auto proj = positive_symbol_projection(cl, 1e-10);
  const auto pc = odd_projection_check(proj, cfg.tol.sym_tol);
  pass = pc.ok && herm <= 1e-12 && square <= 1e-12 && linear == 0.0;
  return predicate_payload(pass, {{"fiber_dim", 1 << N},
                                  {"hermitian", herm},
                                  {"squares_to_xi2", square},
                                  {"linearity", linear},
                                  {"idempotency", pc.idempotency_residual},
                                  {"oddness", pc.oddness_residual}});
}

json check_clifford_relations(const ExperimentConfig&, bool& pass) {
  const auto gen = clifford_generators(3);
  double defect = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CMatrix anti = gen[i] * gen[j] + gen[j] * gen[i];
      const CMatrix expected = (i == j ? 2.0 : 0.0) * CMatrix::Identity(8, 8);
      defect = std::max(defect, opnorm(anti - expected));
    }
  pass = defect <= 1e-12;
  return predicate_payload(pass, {{"anticommutator_defect", defect}});
}

json check_rank_constraint_table(const ExperimentConfig&, bool& pass) {
  const bool a = rank_constraint_check(1, 2);   // n-1 = 1: vacuous
  const bool b = rank_constraint_check(2, 6);   // n-1 = 5 = 2*2+1: multiple of 2
  const bool c = rank_constraint_check(3, 6);   // 3 is not a multiple of 2
  pass = a && b && !c;
  return predicate_payload(pass, {{"n2_rank1", a}, {"n6_rank2", b}, {"n6_rank3", c}});
}

json check_fund_extension_pauli(const ExperimentConfig&, bool& pass) {
  const auto grid = default_grid(2);
  const auto p = positive_symbol_projection(pauli_symbol(grid), 1e-10);
  const auto sigma = sample_symbol(grid, 0, [](const std::array<double, 2>&, const std::array<double, 2>&) {
    return CMatrix(pauli(3));
  });
  const auto doubled = fund_extension(sigma, p, 1e-10);
  const auto even = parity_check(doubled, Parity::Even, 1e-12);
  // composed with its pointwise inverse: identity
  double inverse_defect = 0.0;
  const CMatrix id = CMatrix::Identity(4, 4);
  for (const auto& v : doubled.values) inverse_defect = std::max(inverse_defect, opnorm(v * v.inverse() - id));
  // the doubled symbol maps range(p + p) onto the antipodal image
  double range_defect = 0.0;
  for (int b = 0; b < grid->base_count(); ++b)
    for (int c = 0; c < grid->codirection_count(); ++c) {
      CMatrix P2 = CMatrix::Zero(4, 4);
      P2.topLeftCorner(2, 2) = p.at(b, c);
      P2.bottomRightCorner(2, 2) = p.at(b, c);
      range_defect = std::max(range_defect, opnorm(P2 * (doubled.at(b, c) * P2)));
    }
  pass = even.ok && inverse_defect <= 1e-10 && range_defect <= 1e-10;
  return predicate_payload(pass, {{"even_residual", even.residual},
                                  {"inverse_defect", inverse_defect},
                                  {"range_defect", range_defect}});
}

json check_fund_extension_hardy2(const ExperimentConfig&, bool& pass) {
  // rank-2 ambient over S^1, L = first coordinate at xi = +1; the canonical
  // iso L -> alpha* L is the coordinate swap.
  const auto grid = CosphereGrid::circle(8);
  const auto p = sample_symbol(grid, 0, [](const std::array<double, 2>&, const std::array<double, 2>& xi) {
    CMatrix v = CMatrix::Zero(2, 2);
    if (xi[0] > 0)
      v(0, 0) = 1.0;
    else
      v(1, 1) = 1.0;
    return v;
  });
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto sigma = sample_symbol(grid, 0, [swap](const std::array<double, 2>&, const std::array<double, 2>&) {
    return swap;
  });
  const auto doubled = fund_extension(sigma, p, 1e-12);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.topLeftCorner(2, 2) = swap;
  expected.bottomRightCorner(2, 2) = swap;
  double defect = 0.0;
  for (const auto& v : doubled.values) defect = std::max(defect, opnorm(v - expected));
  pass = defect <= 1e-12 && parity_check(doubled, Parity::Even, 1e-12).ok;
  return predicate_payload(pass, {{"permutation_defect", defect}});
}

// ---------------------------------------------------------------------------
// gluing-check
// ---------------------------------------------------------------------------

json check_gluing_pauli(const ExperimentConfig&, bool& pass) {
  const auto gc = boundary_gluing_check(pauli_symbol(default_grid(2)), 1e-12);
  pass = gc.ok && gc.residual <= 1e-12;
  return predicate_payload(pass, {{"residual", gc.residual},
                                  {"odd_residual", gc.odd_residual},
                                  {"hermitian_residual", gc.hermitian_residual},
                                  {"square_residual", gc.square_residual}});
}

json check_gluing_even_rejected(const ExperimentConfig&, bool& pass) {
  const auto sym = sample_symbol(default_grid(2), 0,
                                 [](const std::array<double, 2>&, const std::array<double, 2>&) {
                                   return CMatrix(CMatrix::Identity(2, 2));
                                 });
  const auto gc = boundary_gluing_check(sym, 1e-12);
  // the even symbol must fail, with the oddness precondition named and the
  // gluing defect peaking at 2 (at tau = 0)
  pass = !gc.ok && gc.failed_precondition == "odd" && std::abs(gc.residual - 2.0) <= 1e-12;
  return predicate_payload(pass, {{"failed_precondition", gc.failed_precondition},
                                  {"residual", gc.residual}});
}

json check_gluing_pole(const ExperimentConfig&, bool& pass) {
  // at the pole tau = 1, xi' = 0 the glued product is exactly the identity
  const auto sym = pauli_symbol(default_grid(2));
  const CMatrix id = CMatrix::Identity(2, 2);
  double defect = 0.0;
  for (const auto& v : sym.values) {
    const CMatrix d_plus = id - cplx(0.0, 0.0) * v;  // tau=1, rho=0
    defect = std::max(defect, opnorm(d_plus * d_plus - id));
  }
  pass = defect == 0.0;
  return predicate_payload(pass, {{"pole_defect", defect}});
}

// ---------------------------------------------------------------------------
// transport-suite
// ---------------------------------------------------------------------------

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

json check_transport_rotation(const ExperimentConfig&, bool& pass) {
  const auto res = transport_projection_path(rotation_path(std::numbers::pi / 3, 100), 100);
  pass = res.range_residual <= 1e-8 && res.unitarity_drift <= 1e-6;
  return predicate_payload(pass, {{"range_residual", res.range_residual},
                                  {"unitarity_drift", res.unitarity_drift},
                                  {"condition", res.condition}});
}

json check_transport_constant(const ExperimentConfig&, bool& pass) {
  const auto path = rotation_path(0.0, 5);
  const auto res = transport_projection_path(path, 100);
  const double id_defect =
      opnorm(res.U.entries - CMatrix::Identity(res.U.entries.rows(), res.U.entries.cols()));
  pass = id_defect <= 1e-10;
  return predicate_payload(pass, {{"identity_defect", id_defect}});
}

json check_transport_rank_jump(const ExperimentConfig&, bool& pass) {
  // interpolating between Hardy projections of different rank must be refused
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
  bool rejected = false;
  std::string message;
  try {
    transport_projection_path(ProjectionPath::uniform(std::move(ps)), 100);
  } catch (const ContractError& e) {
    rejected = true;
    message = e.what();
  }
  pass = rejected;
  return predicate_payload(pass, {{"rejected", rejected}, {"message", message}});
}

json check_transport_d_constancy(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(1, cfg.tol);
  const double theta = std::numbers::pi / 4;
  auto rot = [&](double t) {
    CMatrix R(2, 2);
    R << std::cos(t * theta), -std::sin(t * theta), std::sin(t * theta), std::cos(t * theta);
    return R;
  };
  std::vector<LatticeOperator> ps;
  const int samples = 33;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const CMatrix R = rot(t);
    LatticeOperator P = f.Lp.projection;
    const auto V = constant_fiber_multiplier(f.A.domain, R, "V");
    P.entries = V.entries * f.Lp.projection.entries * V.entries.adjoint();
    ps.push_back(std::move(P));
  }
  const auto res = transport_projection_path(ProjectionPath::uniform(std::move(ps)), 120);

  // dimension at the far endpoint, with the conjugated witness
  const CMatrix R1 = rot(1.0);
  const auto V1 = constant_fiber_multiplier(f.A.domain, R1, "V1");
  const auto U1 = constant_fiber_multiplier(f.A.domain, R1 * pauli(3) * R1.adjoint(), "V1 s3 V1*");
  const auto L1 = map_subspace(V1, f.Lp, "dirac:L+@V1");
  const auto L1m = map_subspace(V1, f.Lm, "dirac:L-@V1");
  const auto d1 = d_via_relative_index(L1, U1, 0, 1e-6, &L1m);
  pass = d1.value == f.d_plus.value && res.range_residual <= 1e-6;
  return predicate_payload(pass, {{"d_start", dyadic_to_json(f.d_plus.value)},
                                  {"d_end", dyadic_to_json(d1.value)},
                                  {"transport_range_residual", res.range_residual},
                                  {"unitarity_drift", res.unitarity_drift}});
}

json check_rotation_homotopy(const ExperimentConfig& cfg, bool& pass) {
  const auto f = make_dirac_family(1, cfg.tol);
  const auto& U = f.sigma3;
  const int n = U.domain.size();

  const auto at0 = rotation_homotopy(U, 0.0);
  const double id_defect = opnorm(at0.entries - CMatrix::Identity(4 * n / 1, 4 * n / 1).topLeftCorner(at0.entries.rows(), at0.entries.cols()));

  const auto at_half = rotation_homotopy(U, std::numbers::pi / 2);
  // |det| is constant in phi
  double det_drift = 0.0;
  Eigen::HouseholderQR<CMatrix> qr0(at0.entries);
  const double logdet0 = qr0.logAbsDeterminant();
  for (int i = 1; i <= 4; ++i) {
    const double phi = i * (std::numbers::pi / 8);
    Eigen::HouseholderQR<CMatrix> qr(rotation_homotopy(U, phi).entries);
    det_drift = std::max(det_drift, std::abs(qr.logAbsDeterminant() - logdet0));
  }

  // endpoint symbol decomposition: conjugating the quadrupled projection by
  // U_{pi/2} yields blockdiag(P, P, s3 P s3, s3 P s3), whose last two symbol
  // blocks are the antipodal complement on the unit cosphere.
  const auto quad = direct_sum(direct_sum(f.Lp.projection, f.Lp.projection),
                               direct_sum(f.Lp.projection, f.Lp.projection));
  Eigen::PartialPivLU<CMatrix> lu(at_half.entries);
  const CMatrix conj =
      at_half.entries * quad.entries * lu.solve(CMatrix::Identity(4 * n, 4 * n));
  const CMatrix s3P = f.sigma3.entries * f.Lp.projection.entries * f.sigma3.entries;
  LatticeOperator s3P_op = f.Lp.projection;
  s3P_op.entries = s3P;
  const auto expected = direct_sum(direct_sum(f.Lp.projection, f.Lp.projection),
                                   direct_sum(s3P_op, s3P_op));
  const double endpoint_defect = opnorm(conj - expected.entries);
  // symbol level: s3 p s3 = Id - p pointwise on the unit cosphere
  double symbol_defect = 0.0;
  const auto& grid = *f.Lp.symbol->grid;
  for (int b = 0; b < grid.base_count(); ++b)
    for (int c = 0; c < grid.codirection_count(); ++c)
      symbol_defect = std::max(
          symbol_defect, opnorm(pauli(3) * f.Lp.symbol->at(b, c) * pauli(3) -
                                (CMatrix::Identity(2, 2) - f.Lp.symbol->at(b, c))));
  pass = id_defect <= 1e-12 && det_drift <= 1e-10 && endpoint_defect <= 1e-10 &&
         symbol_defect <= 1e-10;
  return predicate_payload(pass, {{"identity_at_phi0", id_defect},
                                  {"det_drift", det_drift},
                                  {"endpoint_defect", endpoint_defect},
                                  {"endpoint_symbol_defect", symbol_defect}});
}

// ---------------------------------------------------------------------------
// orthogonalize-suite
// ---------------------------------------------------------------------------

SpectralSubspace skewed_odd_subspace(int K) {
  // oblique rank-1 odd projection in C^2 over S^1: p(+1) projects onto e1
  // along e1 + e2
  const ModeLattice lat(1, K, 2);
  CMatrix p_plus(2, 2);
  p_plus << 1, -1, 0, 0;
  const CMatrix p_minus = CMatrix::Identity(2, 2) - p_plus;
  SpectralSubspace L;
  L.ambient = lat;
  L.projection = assemble_multiplier(
      lat,
      [&](const std::array<int, 2>& k) -> CMatrix {
        if (k[0] > 0) return p_plus;
        if (k[0] < 0) return p_minus;
        return p_plus;  // k = 0: pick the xi = +1 value
      },
      0);
  L.symbol = std::make_shared<SymbolSample>(
      sample_symbol(CosphereGrid::circle(8), 0,
                    [&](const std::array<double, 2>&, const std::array<double, 2>& xi) {
                      return xi[0] > 0 ? p_plus : p_minus;
                    }));
  L.projection.symbol = L.symbol;
  L.orthogonal = false;
  L.symbol_id = "skewed";
  L.provenance.push_back("oblique odd projection over S^1");
  return L;
}

json check_orthogonalize_skewed(const ExperimentConfig&, bool& pass) {
  const auto L = skewed_odd_subspace(3);
  const auto res = orthogonalize_metric(L);
  const auto parity = res.U.symbol ? parity_check(*res.U.symbol, Parity::Even, 1e-12)
                                   : ParityCheck{false, 1.0};
  pass = res.hermitian_residual <= 1e-10 && res.subspace.orthogonal && parity.ok;
  return predicate_payload(pass, {{"hermitian_residual", res.hermitian_residual},
                                  {"U_even_residual", parity.residual}});
}

json check_orthogonalize_identity(const ExperimentConfig&, bool& pass) {
  const auto L = hardy_space(3);
  const auto res = orthogonalize_metric(L);
  const double u_defect =
      opnorm(res.U.entries - CMatrix::Identity(L.ambient.size(), L.ambient.size()));
  pass = u_defect <= 1e-12;
  return predicate_payload(pass, {{"U_identity_defect", u_defect}});
}

json check_orthogonalize_idempotent(const ExperimentConfig&, bool& pass) {
  const auto L = skewed_odd_subspace(3);
  const auto first = orthogonalize_metric(L);
  const auto second = orthogonalize_metric(first.subspace);
  const double u_defect = opnorm(second.U.entries -
                                 CMatrix::Identity(L.ambient.size(), L.ambient.size()));
  pass = u_defect <= 1e-10;
  return predicate_payload(pass, {{"second_U_identity_defect", u_defect}});
}

// ---------------------------------------------------------------------------
// functional-calculus
// ---------------------------------------------------------------------------

json check_projection_formula_random(const ExperimentConfig& cfg, bool& pass) {
  std::mt19937_64 rng(cfg.seed);
  pass = true;
  json cases = json::array();
  const ModeLattice lat(1, 0, 8);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = random_unitary(8, rng);
    Eigen::VectorXd lam(8);
    for (int i = 0; i < 8; ++i) {
      const double mag = 0.5 + 2.5 * rand_unit(rng);
      lam(i) = rand_unit(rng) < 0.5 ? -mag : mag;
    }
    LatticeOperator A;
    A.domain = A.codomain = lat;
    A.entries = u * lam.asDiagonal() * u.adjoint();
    A.label = "random-herm-" + std::to_string(trial);
    const auto formula = positive_projection_formula(A, 1e-8);
    CMatrix eig_proj = CMatrix::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
      if (lam(i) > 0) eig_proj += u.col(i) * u.col(i).adjoint();
    const double gap = opnorm(formula.entries - eig_proj);
    pass = pass && gap <= 1e-8;
    cases.push_back({{"trial", trial}, {"routes_gap", gap}});
  }
  return json{{"kind", "predicate"}, {"ok", pass}, {"cases", cases}};
}

json check_projection_formula_scale(const ExperimentConfig& cfg, bool& pass) {
  std::mt19937_64 rng(cfg.seed + 7);
  const ModeLattice lat(1, 0, 6);
  const CMatrix u = random_unitary(6, rng);
  Eigen::VectorXd lam(6);
  for (int i = 0; i < 6; ++i) lam(i) = (i % 2 ? 1.0 : -1.0) * (1.0 + rand_unit(rng));
  LatticeOperator A;
  A.domain = A.codomain = lat;
  A.entries = u * lam.asDiagonal() * u.adjoint();
  LatticeOperator A5 = A;
  A5.entries *= 5.0;
  const double gap =
      opnorm(positive_projection_formula(A, 1e-8).entries - positive_projection_formula(A5, 1e-8).entries);
  pass = gap <= 1e-12;
  return predicate_payload(pass, {{"scale_gap", gap}});
}

json check_build_A_hardy(const ExperimentConfig& cfg, bool& pass) {
  const int K = 6;
  const auto hardy = hardy_space(K);
  const auto A = build_A_from_projection(hardy.projection, laplacian_s1(K, 1.0));
  auto L = nonnegative_spectral_subspace(A, cfg.tol.rank_tol, hardy.symbol_id);
  const auto rel = relative_index(L, hardy, 1e-9);
  // diagonal conjugation preserves the sign pattern, so the subspaces agree
  const double projection_gap = opnorm(L.projection.entries - hardy.projection.entries);
  pass = rel.value == 0 && projection_gap <= 1e-8;
  return predicate_payload(pass, {{"relative_index", rel.value}, {"projection_gap", projection_gap}});
}

json check_build_A_random(const ExperimentConfig& cfg, bool& pass) {
  std::mt19937_64 rng(cfg.seed + 13);
  pass = true;
  json cases = json::array();
  const int n = 6;
  const ModeLattice lat(1, 0, n);
  for (int trial = 0; trial < 4; ++trial) {
    const CMatrix u = random_unitary(n, rng);
    const int rank = 1 + static_cast<int>(rand_unit(rng) * (n - 1));
    CMatrix P = CMatrix::Zero(n, n);
    for (int i = 0; i < rank; ++i) P += u.col(i) * u.col(i).adjoint();
    LatticeOperator Pop;
    Pop.domain = Pop.codomain = lat;
    Pop.entries = P;
    const CMatrix b = random_matrix(n, n, rng);
    LatticeOperator Delta;
    Delta.domain = Delta.codomain = lat;
    Delta.entries = b.adjoint() * b + 0.1 * CMatrix::Identity(n, n);
    const auto A = build_A_from_projection(Pop, Delta);
    auto L = nonnegative_spectral_subspace(A, cfg.tol.rank_tol, "randP" + std::to_string(trial));
    SpectralSubspace imP;
    imP.ambient = lat;
    imP.projection = Pop;
    imP.orthogonal = true;
    imP.symbol_id = "randP" + std::to_string(trial);
    const auto rel = relative_index(L, imP, 1e-9);
    pass = pass && rel.value == 0 && L.rank() == rank;
    cases.push_back({{"trial", trial}, {"rank", rank}, {"relative_index", rel.value}});
  }
  return json{{"kind", "predicate"}, {"ok", pass}, {"cases", cases}};
}

// ---------------------------------------------------------------------------
// registry and catalog
// ---------------------------------------------------------------------------

const std::map<std::string, CheckFn>& check_registry() {
  static const std::map<std::string, CheckFn> reg = [] {
    std::map<std::string, CheckFn> m;
    m["hardy-symbol-table"] = check_hardy_symbol_table;
    m["hardy-from-momentum"] = check_hardy_from_momentum;
    m["pullback-involution"] = check_pullback_involution;
    m["parity-residuals"] = check_parity_residuals;

    m["toeplitz-winding-1"] = [](const ExperimentConfig& c, bool& p) { return check_toeplitz_n(c, 1, p); };
    m["toeplitz-winding-2"] = [](const ExperimentConfig& c, bool& p) { return check_toeplitz_n(c, 2, p); };
    m["toeplitz-winding-3"] = [](const ExperimentConfig& c, bool& p) { return check_toeplitz_n(c, 3, p); };
    m["toeplitz-extension"] = check_toeplitz_extension;
    m["relative-index-chain"] = check_relative_index_chain;

    m["dirac-spectrum-frozen"] = check_dirac_spectrum_frozen;
    m["dirac-eta-value"] = check_dirac_eta_value;
    m["eta-asymmetric-triple"] = check_eta_asymmetric_triple;
    m["eta-hamiltonian-random"] = check_eta_hamiltonian_random;
    m["d-eta-dirac"] = check_d_eta_dirac;

    m["d-equality-K1"] = [](const ExperimentConfig& c, bool& p) { return check_d_equality_at(1, c.tol, p); };
    m["d-equality-K2"] = [](const ExperimentConfig& c, bool& p) { return check_d_equality_at(2, c.tol, p); };
    m["d-equality-K3"] = [](const ExperimentConfig& c, bool& p) { return check_d_equality_at(3, c.tol, p); };
    m["d-equality-K4"] = [](const ExperimentConfig& c, bool& p) { return check_d_equality_at(4, c.tol, p); };

    m["relative-dimension-property"] = check_relative_dimension_property;
    m["complement-property"] = check_complement_property;
    m["invariance-property"] = check_invariance_property;

    m["oba-identity"] = check_oba_identity;
    m["oba-sigma3"] = check_oba_sigma3;
    m["oba-finite-extension"] = check_oba_finite_extension;
    m["half-index-identity"] = check_half_index_identity;
    m["half-index-conjugate-zeros"] = check_half_index_conjugate_zeros;
    m["half-index-dirac-squared"] = check_half_index_dirac_squared;

    m["gladk-selector"] = check_gladk_selector;
    m["gladk-doubled"] = check_gladk_doubled;
    m["gladk-extended"] = check_gladk_extended;

    m["example6-K2"] = [](const ExperimentConfig& c, bool& p) { return check_example6_at(2, c.tol, p); };
    m["example6-K3"] = [](const ExperimentConfig& c, bool& p) { return check_example6_at(3, c.tol, p); };
    m["example6-K4"] = [](const ExperimentConfig& c, bool& p) { return check_example6_at(4, c.tol, p); };
    m["example6-invertible"] = check_example6_invertible;
    m["example6-degenerate"] = check_example6_degenerate;

    m["pauli-odd-projection"] = check_pauli_odd_projection;
    m["clifford-2-oddness"] = [](const ExperimentConfig& c, bool& p) { return check_clifford_oddness(c, 2, p); };
    m["clifford-3-oddness"] = [](const ExperimentConfig& c, bool& p) { return check_clifford_oddness(c, 3, p); };
    m["clifford-relations"] = check_clifford_relations;
    m["rank-constraint-table"] = check_rank_constraint_table;
    m["fund-extension-pauli"] = check_fund_extension_pauli;
    m["fund-extension-hardy2"] = check_fund_extension_hardy2;

    m["gluing-pauli"] = check_gluing_pauli;
    m["gluing-even-rejected"] = check_gluing_even_rejected;
    m["gluing-pole"] = check_gluing_pole;

    m["transport-rotation"] = check_transport_rotation;
    m["transport-constant"] = check_transport_constant;
    m["transport-rank-jump"] = check_transport_rank_jump;
    m["transport-d-constancy"] = check_transport_d_constancy;
    m["rotation-homotopy"] = check_rotation_homotopy;

    m["orthogonalize-skewed"] = check_orthogonalize_skewed;
    m["orthogonalize-identity"] = check_orthogonalize_identity;
    m["orthogonalize-idempotent"] = check_orthogonalize_idempotent;

    m["projection-formula-random"] = check_projection_formula_random;
    m["projection-formula-scale"] = check_projection_formula_scale;
    m["build-A-hardy"] = check_build_A_hardy;
    m["build-A-random"] = check_build_A_random;
    return m;
  }();
  return reg;
}

ExperimentConfig catalog_config(std::string name, std::string manifold, int K,
                                std::string operator_spec, std::string subspace_spec,
                                std::vector<std::string> checks) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.manifold = std::move(manifold);
  c.truncation = K;
  c.seed = 1;
  c.operator_spec = std::move(operator_spec);
  c.subspace_spec = std::move(subspace_spec);
  c.checks = std::move(checks);
  return c;
}

}  // namespace

std::vector<std::string> known_check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : check_registry()) names.push_back(name);
  return names;
}

const std::vector<CatalogEntry>& experiment_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"hardy-symbol",
       "The boundary-values-of-holomorphic-functions subspace on the circle: its 0/1 symbol table, "
       "oddness of the projection symbol, and agreement with the nonnegative spectral subspace of "
       "-i d/dphi.",
       "p(+1)=1, p(-1)=0; p + alpha*p = Id",
       catalog_config("hardy-symbol", "s1", 3, "momentum", "hardy",
                      {"hardy-symbol-table", "hardy-from-momentum", "pullback-involution",
                       "parity-residuals"})},
      {"hardy-toeplitz",
       "Compressions of e^{in phi} convolutions to the truncated Hardy space: index -n against the "
       "winding oracle, truncation stability, and the finite-extension bookkeeping term.",
       "ind(D, L1, L2) = ind(sigma(D)|_L + 1) + ind(L1, L2);  ind = -winding",
       catalog_config("hardy-toeplitz", "s1", 8, "shift:1", "hardy",
                      {"toeplitz-winding-1", "toeplitz-winding-2", "toeplitz-winding-3",
                       "toeplitz-extension", "relative-index-chain"})},
      {"dirac-eta",
       "Spectral asymmetry of the flat k.sigma operator and of block Hamiltonians built from "
       "random multipliers; the frozen K=1 spectrum; the exact eta identity for [[0,D*],[D,0]].",
       "eta(A) = dim ker A / 2 for symmetric spectra;  eta([[0,D*],[D,0]]) = -ind(D)/2 + dim ker D",
       catalog_config("dirac-eta", "t2", 2, "dirac", "dirac:L+",
                      {"dirac-spectrum-frozen", "dirac-eta-value", "eta-asymmetric-triple",
                       "eta-hamiltonian-random", "d-eta-dirac"})},
      {"dirac-d-equality",
       "The dimension functional by its two independent routes, spectral asymmetry versus relative "
       "index with the sigma3 witness, at truncations 1 through 4.",
       "d(L+) via eta  ==  ind(s3 L+, L-)/2  ==  1",
       catalog_config("dirac-d-equality", "t2", 2, "dirac", "dirac:L+",
                      {"d-equality-K1", "d-equality-K2", "d-equality-K3", "d-equality-K4"})},
      {"thmn-properties",
       "The three defining properties of the dimension functional on the k.sigma subspace family: "
       "relative dimension under finite extensions, complement antisymmetry, and invariance under "
       "constant invertible even conjugations.",
       "d(L+k) - d(L) = k;  d(L) + d(L^perp) = 0;  d(C L) = d(L)",
       catalog_config("thmn-properties", "t2", 2, "dirac", "dirac:L+",
                      {"relative-dimension-property", "complement-property", "invariance-property"})},
      {"oba-suite",
       "The index formula for operators between two odd subspaces, on identity, sigma3-mapped and "
       "finite-extension instances, plus the half-index identity for even operators.",
       "ind(D, L1, L2) = ind(D~)/2 + d(L1) - d(L2);  ind(sigma(D)|_L + 1) = ind(D)/2",
       catalog_config("oba-suite", "t2", 2, "dirac", "dirac:L+",
                      {"oba-identity", "oba-sigma3", "oba-finite-extension", "half-index-identity",
                       "half-index-conjugate-zeros", "half-index-dirac-squared"})},
      {"gladk-suite",
       "The subspace-to-full-space index formula on the d-bar selector pipeline, its direct-sum "
       "doubling, and a finite extension.",
       "ind(D, L, C(M,F)) = ind(D~)/2 + d(L)",
       catalog_config("gladk-suite", "t2", 2, "dbar", "dirac:L+",
                      {"gladk-selector", "gladk-doubled", "gladk-extended"})},
      {"example6",
       "Full reproduction of the worked multiplier example: the selector index equals dim ker D, "
       "eta is computed from the symmetric spectrum, and the assembled identity closes exactly at "
       "several truncations, including an invertible and a fully degenerate instance.",
       "ind(P0, L+(A), C(M,F)) = dim ker D = ind(P0~)/2 + eta(A)",
       catalog_config("example6", "t2", 3, "dbar", "",
                      {"example6-K2", "example6-K3", "example6-K4", "example6-invertible",
                       "example6-degenerate"})},
      {"clifford-oddness",
       "Pointwise spectral projections of the Pauli and exterior-algebra Clifford symbols are odd "
       "projections; generator anticommutation relations; the fiber-rank divisibility table; the "
       "doubled even extension built from a fiberwise isomorphism onto the antipodal image.",
       "cl(xi) cl(eta) + cl(eta) cl(xi) = 2 <xi,eta>;  P+(s) + alpha* P+(s) = Id",
       catalog_config("clifford-oddness", "t2", 1, "clifford:3", "dirac:L+",
                      {"pauli-odd-projection", "clifford-2-oddness", "clifford-3-oddness",
                       "clifford-relations", "rank-constraint-table", "fund-extension-pauli",
                       "fund-extension-hardy2"})},
      {"gluing-check",
       "Continuity of the glued interior symbol tau - i s(xi') across the double: exact for the "
       "Pauli boundary symbol, rejected for an even one, identity at the poles.",
       "(tau - i s(xi'))(tau - i s(-xi')) = (tau^2 + |xi'|^2) Id on the unit cosphere",
       catalog_config("gluing-check", "t2", 1, "dirac", "dirac:L+",
                      {"gluing-pauli", "gluing-even-rejected", "gluing-pole"})},
      {"transport-suite",
       "Transport of projections along paths by the commutator ODE: rotation paths carry ranges "
       "within tolerance, constant paths give the identity, rank jumps are refused, the dimension "
       "functional is constant along a conjugation path, and the rotation deformation has constant "
       "determinant with the expected endpoint decomposition.",
       "dU/dt = [dP/dt, P] U;  Im P_1 = Im U P_0;  d(L_t) = const",
       catalog_config("transport-suite", "s1", 2, "momentum", "hardy",
                      {"transport-rotation", "transport-constant", "transport-rank-jump",
                       "transport-d-constancy", "rotation-homotopy"})},
      {"orthogonalize-suite",
       "Metric orthogonalization of oblique odd projections: the Gram square root is an even "
       "invertible change of basis making the projection Hermitian, the identity on already-"
       "orthogonal subspaces, and idempotent on a second pass.",
       "H = p*p + (1-p)*(1-p);  U = H^{1/2};  U p U^{-1} Hermitian",
       catalog_config("orthogonalize-suite", "s1", 2, "momentum", "hardy",
                      {"orthogonalize-skewed", "orthogonalize-identity", "orthogonalize-idempotent"})},
      {"functional-calculus",
       "The sign-function route to spectral projections against the eigenbasis route on seeded "
       "random Hermitian operators, scale invariance, and recovery of Im P from the quarter-power "
       "sandwich construction.",
       "P+(A) = (1 + A|A|^-1)/2;  L+(D^{1/4}(2P-1)D^{1/4}) = Im P (relative index 0)",
       catalog_config("functional-calculus", "s1", 6, "laplacian", "hardy",
                      {"projection-formula-random", "projection-formula-scale", "build-A-hardy",
                       "build-A-random"})},
  };
  return catalog;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.manifold = j.value("manifold", std::string("t2"));
    c.truncation = j.value("truncation", 2);
    c.seed = j.value("seed", std::uint64_t{1});
    c.operator_spec = j.value("operator_spec", std::string());
    c.subspace_spec = j.value("subspace_spec", std::string());
    c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tol.rank_tol = t.value("rank_tol", c.tol.rank_tol);
      c.tol.sym_tol = t.value("sym_tol", c.tol.sym_tol);
      c.tol.pair_tol = t.value("pair_tol", c.tol.pair_tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  return json{{"name", name},
              {"manifold", manifold},
              {"truncation", truncation},
              {"seed", seed},
              {"operator_spec", operator_spec},
              {"subspace_spec", subspace_spec},
              {"checks", checks},
              {"tolerances",
               {{"rank_tol", tol.rank_tol}, {"sym_tol", tol.sym_tol}, {"pair_tol", tol.pair_tol}}}};
}

namespace {

void validate_config(const ExperimentConfig& c) {
  if (c.name.empty()) throw ConfigError("experiment config: name is required");
  if (c.manifold != "s1" && c.manifold != "t2")
    throw ConfigError("experiment config: manifold must be 's1' or 't2'");
  if (c.truncation < 0) throw ConfigError("experiment config: truncation must be nonnegative");
  if (!(c.tol.rank_tol > 0.0) || !(c.tol.sym_tol > 0.0) || !(c.tol.pair_tol > 0.0))
    throw ConfigError("experiment config: all tolerances must be positive");
  if (c.checks.empty()) throw ConfigError("experiment config: at least one check is required");
  const auto& reg = check_registry();
  for (const auto& name : c.checks)
    if (reg.find(name) == reg.end())
      throw ConfigError("experiment config: unknown check name '" + name + "'");
  if ((c.operator_spec == "dirac" || c.subspace_spec == "dirac:L+") && c.truncation < 1)
    throw ConfigError("experiment config: dirac needs K >= 1 for a nonzero mode");
  // fail fast on malformed specs (the builders throw ConfigError)
  if (!c.operator_spec.empty()) operator_from_spec(c.operator_spec, c.manifold, std::max(1, c.truncation));
  if (!c.subspace_spec.empty())
    subspace_from_spec(c.subspace_spec, c.manifold, std::max(1, c.truncation), c.tol.rank_tol);
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  RunReport report;
  report.config = config;
  report.overall_pass = true;
  const auto& reg = check_registry();
  for (const auto& name : config.checks) {
    CheckOutcome outcome;
    outcome.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      bool pass = false;
      outcome.payload = reg.at(name)(config, pass);
      outcome.pass = pass;
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.payload = json{{"kind", "error"}, {"error", e.what()}};
    }
    outcome.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.overall_pass = report.overall_pass && outcome.pass;
    report.checks.push_back(std::move(outcome));
  }
  return report;
}

json RunReport::to_json(bool include_timings) const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    json entry{{"name", c.name}, {"pass", c.pass}, {"result", c.payload}};
    if (include_timings) entry["wall_ms"] = c.wall_ms;
    checks_json.push_back(std::move(entry));
  }
  json out{{"library", std::string("oddlab ") + ODDLAB_VERSION},
           {"config", config.to_json()}};
  if (!overrides.empty()) out["overrides"] = overrides;
  out["checks"] = std::move(checks_json);
  out["overall_pass"] = overall_pass;
  return out;
}

void write_report_csv(const RunReport& report, std::ostream& os) {
  os << "experiment,check,pass,kind,detail\n";
  for (const auto& c : report.checks) {
    const std::string kind = c.payload.value("kind", std::string("?"));
    std::string detail;
    if (kind == "index")
      detail = "lhs=" + std::to_string(c.payload.value("lhs", 0L));
    else if (kind == "error")
      detail = c.payload.value("error", std::string());
    os << report.config.name << ',' << c.name << ',' << (c.pass ? "true" : "false") << ',' << kind
       << ",\"" << detail << "\"\n";
  }
}

int verify_all(std::ostream& log, const std::string& out_dir) {
  const auto& catalog = experiment_catalog();
  std::vector<RunReport> reports(catalog.size());
  const int threads = par::max_threads();

  if (threads > 1) {
    std::vector<std::future<RunReport>> futures;
    futures.reserve(catalog.size());
    for (const auto& entry : catalog)
      futures.push_back(std::async(std::launch::async, [&entry] { return run_experiment(entry.config); }));
    for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < catalog.size(); ++i) reports[i] = run_experiment(catalog[i].config);
  }

  bool all_pass = true;
  json summary = json::array();
  for (size_t i = 0; i < catalog.size(); ++i) {
    const auto& rep = reports[i];
    all_pass = all_pass && rep.overall_pass;
    int passed = 0;
    for (const auto& c : rep.checks) passed += c.pass ? 1 : 0;
    log << (rep.overall_pass ? "PASS" : "FAIL") << "  " << catalog[i].name << "  (" << passed << "/"
        << rep.checks.size() << " checks)\n";
    summary.push_back({{"name", catalog[i].name},
                       {"pass", rep.overall_pass},
                       {"checks_passed", passed},
                       {"checks_total", rep.checks.size()}});
    if (!out_dir.empty()) {
      std::ofstream f(out_dir + "/" + catalog[i].name + ".json");
      f << rep.to_json().dump(2) << "\n";
    }
  }
  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/verify-all.json");
    f << json{{"library", std::string("oddlab ") + ODDLAB_VERSION},
              {"entries", summary},
              {"overall_pass", all_pass}}
             .dump(2)
      << "\n";
  }
  log << (all_pass ? "all experiments passed\n" : "FAILURES present\n");
  return all_pass ? 0 : 1;
}

}  // namespace oddlab
