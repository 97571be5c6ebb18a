#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gpt/kernels.hpp"
#include "gpt/liouville.hpp"
#include "gpt/symmetry.hpp"

namespace {

using namespace gpt;

liouville::LiouvilleMatrix harmonic(int n) {
  liouville::PhaseSpaceGrid grid;
  grid.nx = grid.np = n;
  return liouville::liouville_matrix(grid, liouville::potential_by_name("harmonic", grid));
}

template <bool Parallel>
void BM_CsrMatvec(benchmark::State& state) {
  const auto l = harmonic(static_cast<int>(state.range(0)));
  const auto a = l.csr();
  std::vector<double> x(static_cast<size_t>(a.rows), 1.0), y(x.size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::csr_matvec(a, x, y);
    else kernels::serial::csr_matvec(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.values.size()));
}

template <bool Parallel>
void BM_Rk4(benchmark::State& state) {
  const auto l = harmonic(static_cast<int>(state.range(0)));
  const auto rho0 = liouville::gaussian_density(l.grid, 1.5, 1.0, 0.5);
  for (auto _ : state) {
    std::vector<double> x(rho0.values.data(), rho0.values.data() + rho0.values.size());
    if constexpr (Parallel) kernels::rk4_linear(l.csr(), -1.0, x, 0.1, 1e-3);
    else kernels::serial::rk4_linear(l.csr(), -1.0, x, 0.1, 1e-3);
    benchmark::DoNotOptimize(x.data());
  }
}

template <bool Parallel>
void BM_EnergyDrift(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<Mat3> maps;
  for (int k = 0; k < 64; ++k) maps.push_back(rotation_about(Vec3::UnitZ(), 0.1 * k));
  std::vector<Vec3> states(static_cast<size_t>(state.range(0)));
  for (auto& s : states) s = Vec3(g(rng), g(rng), g(rng));
  const Vec3 h(0, 0, 1);
  for (auto _ : state) {
    double d = Parallel ? kernels::max_energy_drift(h, maps, states)
                        : kernels::serial::max_energy_drift(h, maps, states);
    benchmark::DoNotOptimize(d);
  }
}

template <bool Parallel>
void BM_PolytopeSymmetries(benchmark::State& state) {
  std::vector<Vec3> cube;
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) cube.emplace_back(sx, sy, sz);
  for (auto _ : state) {
    auto g = Parallel ? symmetry::polytope_symmetries(cube) : symmetry::polytope_symmetries_serial(cube);
    benchmark::DoNotOptimize(g.order());
  }
}

}  // namespace

BENCHMARK(BM_CsrMatvec<true>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_CsrMatvec<false>)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_Rk4<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_Rk4<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_EnergyDrift<true>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_EnergyDrift<false>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_PolytopeSymmetries<true>);
BENCHMARK(BM_PolytopeSymmetries<false>);

BENCHMARK_MAIN();
