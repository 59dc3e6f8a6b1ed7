#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "klpath/counter_rng.hpp"
#include "klpath/kloosterman.hpp"
#include "klpath/limitlaw.hpp"
#include "klpath/modarith.hpp"
#include "klpath/path.hpp"
#include "klpath/verify.hpp"

using namespace klpath;

static void BM_CompleteSum(benchmark::State& state) {
  const PrimePowerModulus m(static_cast<std::uint64_t>(state.range(0)), 2);
  const KloostermanKernel kernel(UnitResidue(1, m));
  std::uint64_t a = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel.complete_sum(a));
    a = a % (m.q() - 1) + 1;
    if (!m.is_unit(a)) ++a;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.phi()));
}
BENCHMARK(BM_CompleteSum)->Arg(31)->Arg(101)->Arg(313);

static void BM_PrefixSums(benchmark::State& state) {
  const PrimePowerModulus m(static_cast<std::uint64_t>(state.range(0)), 2);
  const KloostermanKernel kernel(UnitResidue(1, m));
  std::vector<std::complex<double>> out(m.phi());
  for (auto _ : state) {
    kernel.prefix_sums(2, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.phi()));
}
BENCHMARK(BM_PrefixSums)->Arg(101)->Arg(313);

static void BM_InverseTable(benchmark::State& state) {
  const PrimePowerModulus m(3, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inverse_table(m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.q()));
}
BENCHMARK(BM_InverseTable)->Arg(8)->Arg(12);

static void BM_ModulusTables(benchmark::State& state) {
  const PrimePowerModulus m(101, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ModulusTables(m));
}
BENCHMARK(BM_ModulusTables);

static void BM_FourierCoeff(benchmark::State& state) {
  const PrimePowerModulus m(101, 2);
  const RationalTime t(3, 7);
  std::int64_t h = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coeff(h++, t, m));
}
BENCHMARK(BM_FourierCoeff);

static void BM_Moments(benchmark::State& state) {
  const PrimePowerModulus m(static_cast<std::uint64_t>(state.range(0)), 2);
  std::vector<TimePair> pairs;
  for (std::uint64_t i = 0; i < 64; ++i) pairs.push_back({RationalTime(i, 128), RationalTime(i + 32, 128)});
  for (auto _ : state) benchmark::DoNotOptimize(moments(pairs, 4, UnitResidue(1, m)));
}
BENCHMARK(BM_Moments)->Arg(31)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_LimitSeries(benchmark::State& state) {
  const auto H = static_cast<std::uint64_t>(state.range(0));
  const LimitSeriesCoefficients coefficients(0.5, H);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const LimitSeriesSample sample(MuSampler(seed++), H);
    benchmark::DoNotOptimize(coefficients.evaluate(sample));
  }
}
BENCHMARK(BM_LimitSeries)->Arg(1000)->Arg(10201);

static void BM_Philox(benchmark::State& state) {
  const Philox4x32 gen(42);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen(i++, 0));
}
BENCHMARK(BM_Philox);
BENCHMARK_MAIN();
