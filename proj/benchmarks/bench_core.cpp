#include <random>

#include <benchmark/benchmark.h>

#include "permot/numfield/lattice.hpp"
#include "permot/onemotive/motive.hpp"
#include "permot/perimod/hom.hpp"

using namespace permot;

namespace {

IntMatrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937 rng(seed);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rng() % 21) - 10;
  return m;
}

OneMotive kummer(std::size_t s, std::size_t r) {
  static const long primes[] = {2, 3, 5, 7, 11, 13};
  FieldMatrix u(s, r);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < r; ++j) u(i, j) = primes[(i + 2 * j) % 6];
  return torus_lattice_motive(u);
}

}  // namespace

static void BM_Hnf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IntMatrix g = random_matrix(n, 2 * n, 11);
  for (auto _ : state) benchmark::DoNotOptimize(Lattice::span(g));
}
BENCHMARK(BM_Hnf)->Arg(4)->Arg(8)->Arg(16);

static void BM_Realize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const OneMotive m = kummer(n, n);
  for (auto _ : state) {
    auto reg = std::make_shared<SymbolRegistry>();
    register_symbols(m, *reg);
    reg->freeze();
    benchmark::DoNotOptimize(realize_bdr(m, reg));
  }
}
BENCHMARK(BM_Realize)->Arg(1)->Arg(2)->Arg(3);

static void BM_HomGroup(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const OneMotive m = kummer(n, n);
  auto reg = std::make_shared<SymbolRegistry>();
  register_symbols(m, *reg);
  reg->freeze();
  const PeriodTriple t = realize_bdr(m, reg);
  for (auto _ : state) benchmark::DoNotOptimize(hom_group(t, t));
}
BENCHMARK(BM_HomGroup)->Arg(1)->Arg(2)->Arg(3);

static void BM_HomMotives(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const OneMotive m = kummer(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(hom_motives(m, m));
}
BENCHMARK(BM_HomMotives)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK_MAIN();
