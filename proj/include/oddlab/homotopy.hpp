#pragma once

#include "oddlab/subspaces.hpp"

namespace oddlab {

// Path of projections sampled on a uniform time grid over [0, 1].
struct ProjectionPath {
  std::vector<double> times;
  std::vector<LatticeOperator> projections;

  double smoothness() const;  // max ||P_{i+1} - P_i||
  // Checks idempotency of every sample and smoothness < 1 (a jump of norm 1
  // means the rank changed; no continuous projection path does that).
  void validate(double idem_tol = 1e-8) const;

  static ProjectionPath uniform(std::vector<LatticeOperator> samples);
};

struct TransportResult {
  LatticeOperator U;            // transport at t = 1
  double range_residual = 0.0;  // ||(1 - P_1) U P_0||
  double unitarity_drift = 0.0; // ||U* U - Id||
  double condition = 0.0;
};

// Integrates dU/dt = [dP/dt, P] U, U(0) = Id, with the classical 4-stage
// one-step scheme; P is interpolated linearly between samples and dP/dt comes
// from central differences (one-sided at the endpoints). The result carries
// Im P_0 onto Im P_1. Optional polar re-unitarization every 10 steps is off by
// default; the drift is part of the diagnostics either way.
TransportResult transport_projection_path(const ProjectionPath& path, int steps,
                                          bool reunitarize = false);

// The deformation
//   U_phi = Id  +  [ cos(phi)      -U^-1 sin(phi) ]
//                  [ U sin(phi)     cos(phi)      ]
// on the quadrupled fiber (identity on the first two copies, the rotation
// block on the last two). Invertible for every phi with |det| constant.
LatticeOperator rotation_homotopy(const LatticeOperator& U, double phi);

struct OrthogonalizeResult {
  LatticeOperator U;           // even invertible change of basis
  SpectralSubspace subspace;   // U L, with Hermitian projection
  double hermitian_residual = 0.0;
};

// Turns an odd subspace with an oblique (non-Hermitian) odd projection into an
// orthogonally odd one. Pointwise on the symbol, the positive metric
//   H = p* p + (1 - p)*(1 - p)
// is even and makes p self-adjoint; U is the multiplier with symbol H^{1/2}
// (the endpoint of the linear metric homotopy from the flat metric). The
// lattice modes must point along sampled codirections, which on S^1 is always
// true.
OrthogonalizeResult orthogonalize_metric(const SpectralSubspace& L);

}  // namespace oddlab
