#include "udist/dense_mod.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace udist;

namespace {

DenseModMatrix random_matrix(std::size_t n, std::uint32_t m) {
  std::mt19937 rng(static_cast<std::uint32_t>(n * 31 + m));
  std::uniform_int_distribution<std::uint32_t> dist(0, m - 1);
  DenseModMatrix a(n, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.at(i, j) = dist(rng);
  return a;
}

void BM_howell(benchmark::State& state) {
  const DenseModMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::uint32_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(howell_form(a));
}

void BM_howell_reference(benchmark::State& state) {
  const DenseModMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::uint32_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(howell_form_reference(a));
}

void BM_left_kernel(benchmark::State& state) {
  const DenseModMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::uint32_t>(state.range(1)));
  const bool parallel = state.range(2) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(left_kernel(a, parallel));
}

}  // namespace

BENCHMARK(BM_howell)->ArgsProduct({{64, 128, 256}, {3, 12}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_howell_reference)->ArgsProduct({{64, 128, 256}, {3, 12}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_left_kernel)->ArgsProduct({{128}, {3}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
