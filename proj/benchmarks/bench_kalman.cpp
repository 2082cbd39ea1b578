#include <nowcast/kalman.hpp>
#include <nowcast/model.hpp>

#include <benchmark/benchmark.h>

#include <chrono>

namespace {

using namespace nowcast;
using namespace std::chrono;

DfmSpec six_indicators(int years) {
    DfmSpec spec;
    spec.grid_start = year(2000) / January / 1;
    spec.grid_end = year(2000 + years - 1) / December / 31;
    spec.reference = "payems";
    spec.indicators = {
        {"claims", Frequency::weekly, IndicatorKind::stock, Transform::level, ErrorDynamics::iid},
        {"payems", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"ip", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"pilt", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"mts", Frequency::monthly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
        {"gdp", Frequency::quarterly, IndicatorKind::flow, Transform::level, ErrorDynamics::ar1},
    };
    return spec;
}

struct Setup {
    DfmSpec spec;
    DfmParams params;
    StateSpaceSystem system;
    ObservationSet obs;
};

Setup make_setup(int years) {
    DfmSpec spec = six_indicators(years);
    DfmParams params = DfmParams::defaults(spec);
    params.factor_ar = {0.97};
    const Simulation sim = simulate(spec, params, 1);
    StateSpaceSystem system = build_state_space(spec, params);
    ObservationSet obs = make_observations(spec, spec.grid(), sim.observations);
    return {spec, params, std::move(system), std::move(obs)};
}

void BM_FilterAndSmooth(benchmark::State& state) {
    const Setup s = make_setup(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const FilterResult f = filter(s.system, s.obs);
        benchmark::DoNotOptimize(smooth(s.system, f).ads.back());
    }
    state.counters["days"] = static_cast<double>(s.system.n_days());
}
BENCHMARK(BM_FilterAndSmooth)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_LogLikelihood(benchmark::State& state) {
    const Setup s = make_setup(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(s.system, s.obs));
    state.counters["days"] = static_cast<double>(s.system.n_days());
}
BENCHMARK(BM_LogLikelihood)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BuildStateSpace(benchmark::State& state) {
    const Setup s = make_setup(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_state_space(s.spec, s.params).n_days());
}
BENCHMARK(BM_BuildStateSpace)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
