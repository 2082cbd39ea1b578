#include <nowcast/covid.hpp>

#include <benchmark/benchmark.h>

#include <chrono>
#include <cmath>

namespace {

void BM_HpFilter(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.017 * static_cast<double>(i)) + 0.1 * std::cos(0.9 * static_cast<double>(i));
    const auto series = nowcast::DailySeries::from_values(std::chrono::year(2020) / 1 / 1, std::move(v));
    for (auto _ : state) benchmark::DoNotOptimize(nowcast::hp_filter(series, nowcast::kDefaultDailyHpLambda).trend.values.back());
}
BENCHMARK(BM_HpFilter)->Arg(365)->Arg(3650)->Arg(36500)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
