// Serial vs OpenMP comparison for the data-parallel fill kernels: multiplier
// assembly, variable-coefficient convolution assembly, and pointwise symbol
// projection. Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#include "oddlab/builtins.hpp"
#include "oddlab/lattice.hpp"
#include "oddlab/parallel.hpp"
#include "oddlab/symbol.hpp"

using namespace oddlab;

namespace {

MultiplierFn heavy_multiplier() {
  const CMatrix s1 = pauli(1), s2 = pauli(2);
  return [s1, s2](const std::array<int, 2>& k) {
    CMatrix m = static_cast<double>(k[0]) * s1 + static_cast<double>(k[1]) * s2;
    // a little per-mode work so the fill is not pure memory traffic
    for (int i = 0; i < 8; ++i) m = 0.5 * (m + m.adjoint());
    return m;
  };
}

std::vector<VarCoeffTerm> conv_terms() {
  return {{TrigPoly::cosine({1, 0}), [](const std::array<int, 2>& k) {
             CMatrix v(1, 1);
             v(0, 0) = cplx(static_cast<double>(k[0]), static_cast<double>(k[1]));
             return v;
           }},
          {TrigPoly::exponential({0, 1}), [](const std::array<int, 2>&) {
             return CMatrix(CMatrix::Identity(1, 1));
           }}};
}

void BM_AssembleMultiplier_Serial(benchmark::State& state) {
  const ModeLattice lat(2, static_cast<int>(state.range(0)), 2);
  const auto a = heavy_multiplier();
  for (auto _ : state) {
    auto op = assemble_multiplier_serial(lat, a, 1);
    benchmark::DoNotOptimize(op.entries.data());
  }
}

void BM_AssembleMultiplier_Parallel(benchmark::State& state) {
  const ModeLattice lat(2, static_cast<int>(state.range(0)), 2);
  const auto a = heavy_multiplier();
  for (auto _ : state) {
    auto op = assemble_multiplier(lat, a, 1);
    benchmark::DoNotOptimize(op.entries.data());
  }
}

void BM_AssembleVarCoeff_Serial(benchmark::State& state) {
  const ModeLattice lat(2, static_cast<int>(state.range(0)), 1);
  const auto terms = conv_terms();
  for (auto _ : state) {
    auto op = assemble_variable_coeff_serial(lat, terms, 1);
    benchmark::DoNotOptimize(op.entries.data());
  }
}

void BM_AssembleVarCoeff_Parallel(benchmark::State& state) {
  const ModeLattice lat(2, static_cast<int>(state.range(0)), 1);
  const auto terms = conv_terms();
  for (auto _ : state) {
    auto op = assemble_variable_coeff(lat, terms, 1);
    benchmark::DoNotOptimize(op.entries.data());
  }
}

void BM_SymbolProjection_Serial(benchmark::State& state) {
  const auto grid = CosphereGrid::torus(static_cast<int>(state.range(0)), 8);
  const auto sym = pauli_symbol(grid);
  for (auto _ : state) {
    auto p = map_symbol_serial(sym, 0, [](const CMatrix& v) -> CMatrix {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(v);
      CMatrix out = CMatrix::Zero(v.rows(), v.cols());
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) >= 0)
          out += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      return out;
    });
    benchmark::DoNotOptimize(p.values.data());
  }
}

void BM_SymbolProjection_Parallel(benchmark::State& state) {
  const auto grid = CosphereGrid::torus(static_cast<int>(state.range(0)), 8);
  const auto sym = pauli_symbol(grid);
  for (auto _ : state) {
    auto p = map_symbol(sym, 0, [](const CMatrix& v) -> CMatrix {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(v);
      CMatrix out = CMatrix::Zero(v.rows(), v.cols());
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) >= 0)
          out += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      return out;
    });
    benchmark::DoNotOptimize(p.values.data());
  }
}

}  // namespace

BENCHMARK(BM_AssembleMultiplier_Serial)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK(BM_AssembleMultiplier_Parallel)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK(BM_AssembleVarCoeff_Serial)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK(BM_AssembleVarCoeff_Parallel)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK(BM_SymbolProjection_Serial)->Arg(16)->Arg(32);
BENCHMARK(BM_SymbolProjection_Parallel)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
