#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oddlab/linalg.hpp"

namespace oddlab {

enum class Parity { Even, Odd, None };

// Sample grid over the cosphere bundle of S^1 or T^2. Codirections are stored
// as exact +/- pairs (the second half is the bitwise negation of the first),
// so the antipodal involution permutes stored entries and parity residuals
// measure only the symbol, never interpolation.
struct CosphereGrid {
  int dim = 1;
  std::vector<std::array<double, 2>> base_points;   // x samples; component [1] unused on S^1
  std::vector<std::array<double, 2>> codirections;  // unit covectors, closed under exact negation
  std::vector<int> antipode;                        // index of -xi for every xi

  int codirection_count() const { return static_cast<int>(codirections.size()); }
  int base_count() const { return static_cast<int>(base_points.size()); }
  int point_count() const { return base_count() * codirection_count(); }

  // S^1: codirections exactly {+1, -1}; base points 2*pi*j/base_samples.
  static std::shared_ptr<const CosphereGrid> circle(int base_samples = 16);
  // T^2: `codirection_count` unit covectors at equal angles (must be even; the
  // default 8 gives angle multiples of pi/4), base points on a square grid.
  static std::shared_ptr<const CosphereGrid> torus(int base_samples_per_axis = 2,
                                                   int codirection_count = 8);
};

// Matrix-valued function on a cosphere grid: one fiber matrix per (x, xi)
// point, plus the homogeneity degree of the function it samples.
struct SymbolSample {
  std::shared_ptr<const CosphereGrid> grid;
  std::vector<CMatrix> values;  // base-major: values[b * codirection_count + c]
  int degree = 0;

  int rows() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
  int cols() const { return values.empty() ? 0 : static_cast<int>(values.front().cols()); }
  CMatrix& at(int b, int c) { return values[static_cast<size_t>(b) * grid->codirection_count() + c]; }
  const CMatrix& at(int b, int c) const {
    return values[static_cast<size_t>(b) * grid->codirection_count() + c];
  }
};

using SymbolFn = std::function<CMatrix(const std::array<double, 2>& x, const std::array<double, 2>& xi)>;

// Evaluate fn on every grid point (parallel kernel; serial reference below).
SymbolSample sample_symbol(std::shared_ptr<const CosphereGrid> grid, int degree, const SymbolFn& fn);
SymbolSample sample_symbol_serial(std::shared_ptr<const CosphereGrid> grid, int degree, const SymbolFn& fn);

// Pointwise map over a sample's values (parallel kernel; serial reference).
SymbolSample map_symbol(const SymbolSample& s, int degree, const std::function<CMatrix(const CMatrix&)>& fn);
SymbolSample map_symbol_serial(const SymbolSample& s, int degree,
                               const std::function<CMatrix(const CMatrix&)>& fn);

// Pullback under the antipodal involution: output at (x, xi) is the input at
// (x, -xi). Exact on stored grids; applying it twice returns the input bitwise.
SymbolSample pullback_alpha(const SymbolSample& s);

struct ParityCheck {
  bool ok = false;
  double residual = 0.0;
};

// Max over the grid of ||s(x,-xi) - s(x,xi)|| (even) or ||s(x,-xi) + s(x,xi)||
// (odd), in operator norm.
ParityCheck parity_check(const SymbolSample& s, Parity kind, double tol);

struct ProjectionCheck {
  bool ok = false;
  double idempotency_residual = 0.0;
  double oddness_residual = 0.0;  // max ||p + p(-xi) - Id||
};

// A projection-valued symbol p is odd when p(x,xi) + p(x,-xi) = Id.
ProjectionCheck odd_projection_check(const SymbolSample& p, double tol);

// Fiber-rank divisibility forced on an odd subbundle over an n-manifold:
// with n-1 = 2k or 2k+1, rank must be a multiple of 2^(k-1). Vacuous when
// 2^(k-1) <= 1.
bool rank_constraint_check(int rank_L, int manifold_dim);

// Pointwise projection onto the nonnegative eigenspace of a Hermitian,
// invertible symbol. Degenerate values (min |eigenvalue| <= tol) raise a
// NumericError naming the grid point. If the input is odd the result is an
// odd projection.
SymbolSample positive_symbol_projection(const SymbolSample& s, double tol);

// Clifford multiplication on the exterior algebra of C^N (fiber dimension
// 2^N): cl(v) = creation + annihilation along v. For a covector frame
// {f_1..f_dim} at x (orthonormalized internally), the symbol at (x, xi) is
// cl(sum_a xi_a f_a). Hermitian, linear in xi, and cl(xi)^2 = |xi|^2 Id.
using CovectorFrameFn =
    std::function<std::vector<Eigen::VectorXd>(const std::array<double, 2>& x)>;
SymbolSample clifford_symbol(int N, const CovectorFrameFn& frame,
                             std::shared_ptr<const CosphereGrid> grid);
// Flat frame: the first grid->dim coordinate directions of R^N.
SymbolSample clifford_symbol(int N, std::shared_ptr<const CosphereGrid> grid);

// Clifford generator matrices on the 2^N-dimensional fiber.
std::vector<CMatrix> clifford_generators(int N);

// From a fiberwise isomorphism sigma : range p -> range p(-xi) and the odd
// projection p, build the invertible endomorphism
//   s(xi) = sigma(xi) p(xi) + sigma(-xi) (Id - p(xi))
// (which swaps the two summands and is even), and return the doubled even
// symbol s + s^-1 on fiber rank 2r. Consistency of sigma with p is checked to
// `tol`.
SymbolSample fund_extension(const SymbolSample& sigma, const SymbolSample& p_L, double tol = 1e-10);

struct GluingCheck {
  bool ok = false;
  double residual = 0.0;               // max gluing defect on the unit cosphere
  std::string failed_precondition;     // empty when all three preconditions hold
  double odd_residual = 0.0;
  double hermitian_residual = 0.0;
  double square_residual = 0.0;        // max ||s(xi)^2 - Id||
};

// For a boundary symbol s(xi') that is odd, Hermitian and an involution on the
// unit cosphere, the interior symbol tau - i s(xi') glues continuously across
// the double: (tau - i s(xi')) (tau - i s(-xi')) = (tau^2 + |xi'|^2) Id on
// tau^2 + |xi'|^2 = 1. Checks the identity on a tau-grid including the poles.
GluingCheck boundary_gluing_check(const SymbolSample& boundary_symbol, double tol);

}  // namespace oddlab
