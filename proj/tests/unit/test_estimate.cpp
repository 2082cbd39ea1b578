#include <nowcast/error.hpp>
#include <nowcast/estimate.hpp>

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace nowcast {
namespace {

using testing::ymd;

struct Problem {
    DfmSpec spec;
    DfmParams truth;
    Grid grid;
    ObservationSet obs;
};

Problem small_problem(std::uint64_t seed) {
    DfmSpec spec = testing::recovery_spec();
    spec.grid_start = ymd(2018, 1, 1);
    spec.grid_end = ymd(2019, 12, 31);
    const DfmParams truth = testing::recovery_truth(spec);
    const Grid grid = spec.grid();
    const Simulation sim = simulate(spec, truth, seed);
    return {spec, truth, grid, make_observations(spec, grid, sim.observations)};
}

EstimationOptions quick(OptimizerKind kind = OptimizerKind::simplex) {
    EstimationOptions o;
    o.optimizer = kind;
    o.optimizer_options.max_iterations = 400;
    o.optimizer_options.tolerance = 1e-10;
    return o;
}

TEST(Estimate, OptimizerTraceIsMonotone) {
    const Problem p = small_problem(1);
    const EstimationReport r = estimate_mle(p.spec, p.grid, p.obs, DfmParams::defaults(p.spec), quick());
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].value, r.trace[i - 1].value);
    EXPECT_GT(r.loglik, r.initial_loglik);
    EXPECT_NEAR(model_log_likelihood(p.spec, p.grid, p.obs, r.params), r.loglik, 1e-9 * std::abs(r.loglik));
}

TEST(Estimate, RestartingAtTheOptimumStaysThere) {
    const Problem p = small_problem(2);
    EstimationOptions o = quick(OptimizerKind::quasi_newton);
    o.optimizer_options.max_iterations = 300;
    const EstimationReport first = estimate_mle(p.spec, p.grid, p.obs, p.truth, o);
    const EstimationReport again = estimate_mle(p.spec, p.grid, p.obs, first.params, o);
    EXPECT_LE(std::abs(again.loglik - first.loglik), 1e-6 * std::max(1.0, std::abs(first.loglik)));
    const ParamTransform tr(p.spec);
    EXPECT_LT((tr.natural(again.params) - tr.natural(first.params)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Estimate, BothOptimizersAgreeOnTheOptimum) {
    const Problem p = small_problem(3);
    EstimationOptions nm = quick();
    nm.optimizer_options.max_iterations = 3000;
    nm.optimizer_options.tolerance = 1e-12;
    const EstimationReport a = estimate_mle(p.spec, p.grid, p.obs, p.truth, nm);
    const EstimationReport b = estimate_mle(p.spec, p.grid, p.obs, p.truth, quick(OptimizerKind::quasi_newton));
    EXPECT_NEAR(a.loglik, b.loglik, 1e-4 * std::abs(b.loglik));
}

TEST(Estimate, ProfileLikelihoodPeaksNextToTheEstimate) {
    const Problem p = small_problem(4);
    const EstimationReport r = estimate_mle(p.spec, p.grid, p.obs, p.truth, quick(OptimizerKind::quasi_newton));
    const double rho = r.params.factor_ar[0];
    const double step = 0.002;
    std::vector<double> values;
    for (int k = -4; k <= 4; ++k) values.push_back(rho + step * k);
    const auto prof = profile_likelihood(p.spec, p.grid, p.obs, r.params, "factor.ar1", values);
    ASSERT_EQ(prof.size(), values.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < prof.size(); ++i) {
        if (prof[i].second > prof[best].second) best = i;
    }
    EXPECT_LE(std::abs(static_cast<int>(best) - 4), 1);
    for (std::size_t i = 1; i + 1 < prof.size(); ++i) {
        EXPECT_LE(prof[i - 1].second - 2.0 * prof[i].second + prof[i + 1].second, 1e-9) << i;
    }
}

TEST(Estimate, ProfileOutsideTheValidRegionIsMinusInfinity) {
    const Problem p = small_problem(5);
    const auto prof = profile_likelihood(p.spec, p.grid, p.obs, p.truth, "weekly.error_std", {-1.0, 0.5});
    EXPECT_EQ(prof[0].second, -std::numeric_limits<double>::infinity());
    EXPECT_TRUE(std::isfinite(prof[1].second));
}

TEST(Estimate, EmptyDataGivesAFlatProfile) {
    const Problem p = small_problem(6);
    const ObservationSet none(p.grid.size());
    for (const auto& [v, ll] : profile_likelihood(p.spec, p.grid, none, p.truth, "factor.ar1", {0.1, 0.5, 0.9})) {
        EXPECT_EQ(ll, 0.0) << v;
    }
}

TEST(Estimate, DeterministicAcrossRuns) {
    const Problem p = small_problem(7);
    EstimationOptions o = quick();
    o.optimizer_options.max_iterations = 150;
    o.optimizer_options.seed = 5;
    const EstimationReport a = estimate_mle(p.spec, p.grid, p.obs, DfmParams::defaults(p.spec), o);
    const EstimationReport b = estimate_mle(p.spec, p.grid, p.obs, DfmParams::defaults(p.spec), o);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.loglik, b.loglik);
}

TEST(Estimate, SignConventionAppliedToTheResult) {
    const Problem p = small_problem(8);
    DfmParams init = p.truth;
    for (auto& ip : init.indicators) ip.loading = -ip.loading;
    const EstimationReport r = estimate_mle(p.spec, p.grid, p.obs, init, quick(OptimizerKind::quasi_newton));
    EXPECT_GT(r.params.indicators[p.spec.reference_index()].loading, 0.0);
}

TEST(Estimate, InvalidStartIsAnInitializationError) {
    const Problem p = small_problem(9);
    DfmParams init = p.truth;
    init.indicators[0].error_std = 1e-300;
    init.indicators[1].error_std = 1e-300;
    init.indicators[0].loading = 0.0;
    init.indicators[1].loading = 0.0;
    EXPECT_THROW(estimate_mle(p.spec, p.grid, p.obs, init, quick()), InitializationError);
}

TEST(Estimate, StandardErrorsArePositive) {
    const Problem p = small_problem(10);
    const EstimationReport r = estimate_mle(p.spec, p.grid, p.obs, p.truth, quick(OptimizerKind::quasi_newton));
    const StandardErrors se = standard_errors(p.spec, p.grid, p.obs, r.params);
    ASSERT_TRUE(se.ok);
    for (Eigen::Index i = 0; i < se.theta_se.size(); ++i) {
        EXPECT_GT(se.theta_se(i), 0.0);
        EXPECT_GT(se.natural_se(i), 0.0);
    }
}

TEST(Estimate, OptimizerNames) {
    EXPECT_EQ(parse_optimizer_kind("simplex"), OptimizerKind::simplex);
    EXPECT_EQ(parse_optimizer_kind("quasi-newton"), OptimizerKind::quasi_newton);
    EXPECT_THROW(parse_optimizer_kind("annealing"), ValidationError);
}

}  // namespace
}  // namespace nowcast
