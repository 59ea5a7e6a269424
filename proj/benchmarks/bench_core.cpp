#include <benchmark/benchmark.h>

#include "htnqmc/experiment.hpp"

namespace {

using namespace htnqmc;

std::vector<double> angles(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.1 * static_cast<double>(i % 17) - 0.7;
  return out;
}

void BM_MatrixElement(benchmark::State& state) {
  const auto h = build_heisenberg_chain(static_cast<std::size_t>(state.range(0)), 1.0);
  BasisIndex row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_element(h, row, row ^ 0b11));
    row = (row + 1) & 0xFF;
  }
}
BENCHMARK(BM_MatrixElement)->Arg(2)->Arg(3);

void BM_FlipGroupedColumn(benchmark::State& state) {
  const FlipGroupedHamiltonian fh(build_heisenberg_chain(static_cast<std::size_t>(state.range(0)), 1.0));
  BasisIndex h = 0b0101010101010101;
  for (auto _ : state) benchmark::DoNotOptimize(fh.column(h));
}
BENCHMARK(BM_FlipGroupedColumn)->Arg(2)->Arg(4);

void BM_SpawnStep(benchmark::State& state) {
  const FlipGroupedHamiltonian fh(build_heisenberg_chain(2, 1.0));
  WalkerPopulation pop;
  for (BasisIndex h = 0; h < 256; ++h) {
    if (std::popcount(h) == 4) pop.add(h, (h % 3 == 0 ? -1 : 1) * state.range(0));
  }
  std::uint64_t it = 0;
  for (auto _ : state) {
    CounterRng rng(1, ++it);
    benchmark::DoNotOptimize(spawn_step(pop, fh, 1e-3, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * pop.total()));
}
BENCHMARK(BM_SpawnStep)->Arg(10)->Arg(1000);

void BM_HtnEnergy(benchmark::State& state) {
  const auto h = build_heisenberg_chain(2, 1.0);
  const auto dec = heisenberg_decomposition("cluster", 2);
  const auto depth = static_cast<std::size_t>(state.range(0));
  const auto s = HtnState::from_parameters(dec, depth, angles(HtnState::parameter_count(4, 2, depth)));
  for (auto _ : state) benchmark::DoNotOptimize(htn_energy(s, h));
}
BENCHMARK(BM_HtnEnergy)->Arg(1)->Arg(4);

void BM_HtnOverlapBasis(benchmark::State& state) {
  const auto dec = heisenberg_decomposition("cluster", 2);
  const auto s = HtnState::from_parameters(dec, 4, angles(HtnState::parameter_count(4, 2, 4)));
  BasisIndex h = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(htn_overlap_basis(s, h));
    h = (h + 1) & 0xFF;
  }
}
BENCHMARK(BM_HtnOverlapBasis);

void BM_ApplyAnsatz(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = real_amplitude_ansatz(n, 4);
  const auto theta = angles(c.n_params());
  const Statevector zero(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply_circuit(c, theta, zero));
}
BENCHMARK(BM_ApplyAnsatz)->Arg(8)->Arg(12)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
