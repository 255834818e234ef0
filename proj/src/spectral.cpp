#include "oddlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "oddlab/errors.hpp"

namespace oddlab {

EigH eig_hermitian(const LatticeOperator& A, double threshold) {
  if (threshold <= 0.0) throw ContractError("eig_hermitian: threshold must be positive");
  if (!A.square()) throw ContractError("eig_hermitian: operator must be square");
  const double scale = opnorm(A.entries);
  if (hermiticity_residual(A.entries) > 1e-10 * std::max(1.0, scale))
    throw ContractError("eig_hermitian: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((A.entries + A.entries.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericError("eig_hermitian: eigensolver failed");
  EigH out;
  out.basis = es.eigenvectors();
  out.spectrum.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  out.spectrum.threshold = threshold;
  for (double l : out.spectrum.eigenvalues)
    if (std::abs(l) <= threshold) ++out.spectrum.kernel_dim;
  return out;
}

EtaResult eta_invariant(const LatticeOperator& A, double pair_tol) {
  if (pair_tol <= 0.0) throw ContractError("eta_invariant: pair_tol must be positive");
  const double scale = std::max(1e-300, opnorm(A.entries));
  const double tol = pair_tol * scale;
  const EigH eig = eig_hermitian(A, tol);

  std::vector<double> pos;
  std::multiset<double> neg;  // |values| of the negative eigenvalues
  for (double l : eig.spectrum.eigenvalues) {
    if (std::abs(l) <= tol) continue;
    if (l > 0)
      pos.push_back(l);
    else
      neg.insert(-l);
  }
  std::sort(pos.begin(), pos.end());

  EtaResult out;
  out.kernel_count = eig.spectrum.kernel_dim;

  // Greedy nearest-match pairing of +lambda with -lambda, ascending |lambda|.
  for (double p : pos) {
    auto above = neg.lower_bound(p);
    auto best = neg.end();
    double best_gap = tol;
    int candidates = 0;
    if (above != neg.end() && *above - p <= tol) {
      ++candidates;
      best = above;
      best_gap = *above - p;
    }
    if (above != neg.begin()) {
      const auto below = std::prev(above);
      const double gap = p - *below;
      if (gap <= tol) {
        ++candidates;
        if (best == neg.end() || gap < best_gap) best = below;
      }
    }
    if (best != neg.end()) {
      neg.erase(best);
      ++out.symmetric_pairs;
      if (candidates > 1) ++out.ambiguous_pairs;
    } else {
      out.unpaired.push_back(p);
      out.unpaired_sign_sum += 1;
    }
  }
  for (double n : neg) {
    out.unpaired.push_back(-n);
    out.unpaired_sign_sum -= 1;
  }
  std::sort(out.unpaired.begin(), out.unpaired.end());

  out.kernel_contribution = out.kernel_count / 2.0;
  out.asymmetry_sum = static_cast<double>(out.unpaired_sign_sum);
  out.value = out.kernel_contribution + out.asymmetry_sum / 2.0;
  out.exact = true;  // truncated spectra always have finite asymmetry
  return out;
}

LatticeOperator positive_projection_formula(const LatticeOperator& A, double tol) {
  if (tol <= 0.0) throw ContractError("positive_projection_formula: tol must be positive");
  if (!A.square()) throw ContractError("positive_projection_formula: operator must be square");
  const double scale = opnorm(A.entries);
  if (hermiticity_residual(A.entries) > 1e-10 * std::max(1.0, scale))
    throw ContractError("positive_projection_formula: operator is not Hermitian");
  Eigen::BDCSVD<CMatrix> svd(A.entries);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= tol * scale)
    throw NumericError("positive_projection_formula: operator has near-kernel eigenvalue " +
                       std::to_string(sv.size() ? sv(sv.size() - 1) : 0.0) +
                       "; the formula assumes invertibility");
  LatticeOperator out;
  out.domain = out.codomain = A.domain;
  const CMatrix sign = matrix_sign_newton(A.entries);
  out.entries = (CMatrix::Identity(A.entries.rows(), A.entries.cols()) + sign) / 2.0;
  out.order = 0;
  out.bandwidth = A.bandwidth == 0 ? 0 : A.domain.K;
  out.label = A.label.empty() ? "P+(A)" : "P+(" + A.label + ")";
  return out;
}

LatticeOperator build_A_from_projection(const LatticeOperator& P, const LatticeOperator& Delta,
                                        double reg) {
  if (!P.square() || !Delta.square() || P.domain != Delta.domain)
    throw ContractError("build_A_from_projection: P and Delta must be square on the same lattice");
  if (opnorm(P.entries * P.entries - P.entries) > 1e-8 ||
      hermiticity_residual(P.entries) > 1e-8)
    throw ContractError("build_A_from_projection: P is not an orthogonal projection");
  if (hermiticity_residual(Delta.entries) > 1e-10 * std::max(1.0, opnorm(Delta.entries)))
    throw ContractError("build_A_from_projection: Delta is not Hermitian");
  CMatrix delta = Delta.entries;
  if (reg != 0.0) delta += reg * CMatrix::Identity(delta.rows(), delta.cols());
  CMatrix root;
  try {
    root = hermitian_power(delta, 0.25, 0.0);
  } catch (const ContractError&) {
    throw ContractError("build_A_from_projection: Delta is not positive definite (add regularization)");
  }
  LatticeOperator out;
  out.domain = out.codomain = P.domain;
  const CMatrix reflect = 2.0 * P.entries - CMatrix::Identity(P.entries.rows(), P.entries.cols());
  out.entries = root * reflect * root;
  out.order = Delta.order / 2;
  out.bandwidth = P.bandwidth + Delta.bandwidth;
  out.label = "D^1/4(2P-1)D^1/4[" + P.label + "]";
  return out;
}

LatticeOperator hamiltonian_from_D(const LatticeOperator& D) {
  const LatticeOperator dstar = adjoint(D);
  LatticeOperator out = block2(nullptr, &dstar, &D, nullptr);
  out.order = D.order;
  out.bandwidth = D.bandwidth;
  out.parity = D.parity;
  if (D.symbol) {
    auto s = std::make_shared<SymbolSample>();
    s->grid = D.symbol->grid;
    s->degree = D.symbol->degree;
    s->values.resize(D.symbol->values.size());
    for (size_t i = 0; i < s->values.size(); ++i) {
      const CMatrix& v = D.symbol->values[i];
      CMatrix blk = CMatrix::Zero(v.rows() + v.cols(), v.rows() + v.cols());
      blk.topRightCorner(v.cols(), v.rows()) = v.adjoint();
      blk.bottomLeftCorner(v.rows(), v.cols()) = v;
      s->values[i] = blk;
    }
    out.symbol = std::move(s);
  }
  out.label = D.label.empty() ? "hamiltonian(D)" : "hamiltonian(" + D.label + ")";
  return out;
}

DimensionResult d_via_eta(const LatticeOperator& A, const AdmissibilityReport& admissibility,
                          double pair_tol, double sym_tol) {
  if (!A.symbol) throw ContractError("d_via_eta: operator carries no declared symbol");
  const auto parity = parity_check(*A.symbol, Parity::Odd, sym_tol);
  if (!parity.ok)
    throw ContractError("d_via_eta: principal symbol is not odd (residual " +
                        std::to_string(parity.residual) + ")");
  if (!admissibility.checked_parts_ok())
    throw ContractError("d_via_eta: admissibility check failed on a representable part");
  const EtaResult eta = eta_invariant(A, pair_tol);
  if (!eta.exact) throw NumericError("d_via_eta: spectral asymmetry is not finite at truncation");
  DimensionResult out;
  out.value = eta.exact_value();
  if (std::abs(out.value.to_double() - eta.value) > 1e-9)
    throw NumericError("d_via_eta: dyadic reconstruction does not match the eta value");
  out.route = DRoute::Eta;
  out.witness = "eta of " + (A.label.empty() ? std::string("A") : A.label);
  if (!admissibility.unchecked.empty()) out.witness += " [unchecked: " + admissibility.unchecked + "]";
  return out;
}

DimensionResult d_via_relative_index(const SpectralSubspace& L, const LatticeOperator& U, int N,
                                     double tol, const SpectralSubspace* declared_complement,
                                     double sym_tol) {
  if (N < 0 || N > 8) throw ContractError("d_via_relative_index: N out of range");
  bool even_ok = U.parity == Parity::Even;
  if (!even_ok && U.symbol) even_ok = parity_check(*U.symbol, Parity::Even, sym_tol).ok;
  if (!even_ok) throw ContractError("d_via_relative_index: witness operator is not even");

  const SpectralSubspace LN = power_direct_sum(L, 1 << N);
  if (U.domain != LN.ambient)
    throw ContractError("d_via_relative_index: witness does not act on the 2^N-fold ambient space");
  const SpectralSubspace comp = declared_complement ? *declared_complement : complement(LN);
  const SpectralSubspace UL = map_subspace(U, LN, comp.symbol_id);
  const RelIndex ind = relative_index(UL, comp, tol);

  DimensionResult out;
  out.value = Dyadic(ind.value, N + 1);
  out.route = DRoute::RelativeIndex;
  out.witness = "ind(U L, L^perp)/2^" + std::to_string(N + 1) + " with U=" +
                (U.label.empty() ? std::string("?") : U.label);
  return out;
}

DimensionResult d_via_chain(const DimensionResult& base_d, const SpectralSubspace& L,
                            const SpectralSubspace& base, double tol) {
  const RelIndex ind = relative_index(L, base, tol);
  DimensionResult out;
  out.value = base_d.value + Dyadic::integer(ind.value);
  out.route = DRoute::RelativeIndex;
  out.witness = "d(base) + ind(L, base); base: " + base_d.witness;
  return out;
}

}  // namespace oddlab
