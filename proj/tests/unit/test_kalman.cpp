#include <nowcast/error.hpp>
#include <nowcast/kalman.hpp>
#include <nowcast/model.hpp>

#include "dense_oracle.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace nowcast {
namespace {

using testing::close_relative;
using testing::dense_oracle;
using testing::ymd;

constexpr double kOracleTol = 1e-8;

void expect_matches_oracle(const StateSpaceSystem& sys, const ObservationSet& obs, const std::string& label) {
    const FilterResult f = filter(sys, obs);
    const SmootherResult s = smooth(sys, f);
    const testing::OracleResult o = dense_oracle(sys, obs);
    for (std::int64_t t = 0; t < sys.n_days(); ++t) {
        const auto i = static_cast<std::size_t>(t);
        EXPECT_TRUE(close_relative(f.steps[i].filtered_mean, o.filtered_means[i], kOracleTol)) << label << " day " << t;
        EXPECT_TRUE(close_relative(f.steps[i].filtered_cov, o.filtered_covs[i], kOracleTol)) << label << " day " << t;
        EXPECT_TRUE(close_relative(s.means[i], o.smoothed_means[i], kOracleTol)) << label << " day " << t;
        EXPECT_TRUE(close_relative(s.covs[i], o.smoothed_covs[i], kOracleTol)) << label << " day " << t;
    }
    EXPECT_TRUE(close_relative(f.log_likelihood, o.log_likelihood, kOracleTol))
        << label << " " << f.log_likelihood << " vs " << o.log_likelihood;
}

TEST(Kalman, RandomSystemsMatchDenseConditioning) {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 24; ++rep) {
        const std::int64_t days = 5 + static_cast<std::int64_t>(rng() % 26);
        const StateSpaceSystem sys = testing::random_system(rng, days);
        const double keep = rep % 4 == 0 ? 1.0 : 0.6;
        expect_matches_oracle(sys, testing::random_observations(sys, rng, keep), "system " + std::to_string(rep));
    }
}

TEST(Kalman, RandomFactorModelsMatchDenseConditioning) {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        const DfmSpec spec = testing::random_small_spec(rng, ymd(2020, 2, 20), 20 + static_cast<std::int64_t>(rng() % 21));
        const StateSpaceSystem sys = build_state_space(spec, testing::random_params(spec, rng));
        expect_matches_oracle(sys, testing::random_observations(sys, rng, 0.8), "model " + std::to_string(rep));
    }
}

TEST(Kalman, ShortWeeklyFlowExample) {
    // Five days, one weekly flow observed on its period end.
    DfmSpec spec;
    spec.grid_start = ymd(2020, 3, 3);  // Tuesday; the week ends Saturday 2020-03-07
    spec.grid_end = ymd(2020, 3, 7);
    spec.indicators = {{"w", Frequency::weekly, IndicatorKind::flow, Transform::level, ErrorDynamics::iid}};
    DfmParams params = DfmParams::defaults(spec);
    params.factor_ar = {0.9};
    params.indicators[0] = IndicatorParams{1.0, 0.0, 0.5, 0.0};
    const StateSpaceSystem sys = build_state_space(spec, params);
    ObservationSet obs(5);
    obs.add(4, 0, 1.3);
    expect_matches_oracle(sys, obs, "weekly");
    EXPECT_EQ(filter(sys, obs).n_observations, 1u);
}

TEST(Kalman, ScalarNoiselessObservationPinsState) {
    StateSpaceSystem sys(1, 1, Vector::Zero(1), Matrix::Identity(1, 1));
    const auto tr = sys.add_transition({Matrix::Constant(1, 1, 0.5), Matrix::Identity(1, 1)});
    const auto ms = sys.add_measurement({{0}, Matrix::Identity(1, 1), Vector::Zero(1), Matrix::Zero(1, 1)});
    sys.append_day(tr, ms);
    sys.append_day(tr, std::nullopt);
    ObservationSet obs(2);
    obs.add(0, 0, 2.0);
    const FilterResult f = filter(sys, obs);
    EXPECT_NEAR(f.steps[0].filtered_mean(0), 2.0, 1e-14);
    EXPECT_NEAR(f.steps[0].filtered_cov(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(f.steps[1].filtered_mean(0), 1.0, 1e-14);
    // Predicted variance 0.25 + 1 = 1.25 on day 0.
    const double expected = -0.5 * (std::log(2.0 * std::numbers::pi * 1.25) + 4.0 / 1.25);
    EXPECT_NEAR(f.log_likelihood, expected, 1e-14);
}

TEST(Kalman, NoObservationsGivesPriorAndZeroLikelihood) {
    const DfmSpec spec = testing::six_indicator_spec(ymd(2020, 1, 1), ymd(2020, 6, 30));
    const StateSpaceSystem sys = build_state_space(spec, DfmParams::defaults(spec));
    const ObservationSet none(sys.n_days());
    const FilterResult f = filter(sys, none);
    EXPECT_EQ(f.log_likelihood, 0.0);
    EXPECT_EQ(log_likelihood(sys, none), 0.0);
    const SmootherResult s = smooth(sys, f);
    for (std::int64_t t = 0; t < sys.n_days(); ++t) EXPECT_EQ(s.ads[static_cast<std::size_t>(t)], 0.0);
}

TEST(Kalman, LikelihoodShortcutMatchesFullFilter) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const StateSpaceSystem sys = testing::random_system(rng, 60);
        const ObservationSet obs = testing::random_observations(sys, rng, 0.5);
        EXPECT_EQ(log_likelihood(sys, obs), filter(sys, obs).log_likelihood);
    }
}

TEST(Kalman, RemovingAnObservationIsTheSameAsNeverHavingIt) {
    std::mt19937_64 rng(9);
    const StateSpaceSystem sys = testing::random_system(rng, 40);
    ObservationSet obs = testing::random_observations(sys, rng, 1.0);
    ObservationSet fewer = obs;
    std::int64_t removed_day = -1;
    for (std::int64_t t = 20; t < 40 && removed_day < 0; ++t) {
        if (!fewer.at(t).empty()) {
            fewer.remove(t, fewer.at(t).front().slot);
            removed_day = t;
        }
    }
    ASSERT_GE(removed_day, 0);
    const FilterResult a = filter(sys, obs);
    const FilterResult b = filter(sys, fewer);
    for (std::int64_t t = 0; t < removed_day; ++t) {
        const auto i = static_cast<std::size_t>(t);
        EXPECT_EQ(a.steps[i].filtered_mean, b.steps[i].filtered_mean);
    }
    expect_matches_oracle(sys, fewer, "fewer");
}

TEST(Kalman, MoreDataNeverIncreasesVariance) {
    std::mt19937_64 rng(31);
    const DfmSpec spec = testing::six_indicator_spec(ymd(2020, 1, 1), ymd(2020, 12, 31));
    const DfmParams params = DfmParams::defaults(spec);
    const StateSpaceSystem sys = build_state_space(spec, params);
    const ObservationSet full = testing::random_observations(sys, rng, 1.0);
    ObservationSet half(sys.n_days());
    for (std::int64_t t = 0; t < sys.n_days(); ++t) {
        for (const auto& o : full.at(t)) {
            if (o.slot % 2 == 0) half.add(t, o.slot, o.value);
        }
    }
    const SmootherResult a = smooth(sys, filter(sys, full));
    const SmootherResult b = smooth(sys, filter(sys, half));
    for (std::size_t t = 0; t < a.ads_std.size(); ++t) EXPECT_LE(a.ads_std[t], b.ads_std[t] + 1e-12) << t;
}

TEST(Kalman, CovariancesStaySymmetric) {
    std::mt19937_64 rng(3);
    const DfmSpec spec = testing::six_indicator_spec(ymd(2019, 1, 1), ymd(2020, 12, 31));
    const StateSpaceSystem sys = build_state_space(spec, testing::random_params(spec, rng));
    const FilterResult f = filter(sys, testing::random_observations(sys, rng, 0.9));
    const SmootherResult s = smooth(sys, f);
    for (std::size_t t = 0; t < f.steps.size(); ++t) {
        EXPECT_LT((f.steps[t].filtered_cov - f.steps[t].filtered_cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((s.covs[t] - s.covs[t].transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Kalman, SmootherEndsOnTheFilteredMomentsExactly) {
    std::mt19937_64 rng(17);
    const DfmSpec spec = testing::six_indicator_spec(ymd(2020, 1, 1), ymd(2020, 5, 15));
    const StateSpaceSystem sys = build_state_space(spec, testing::random_params(spec, rng));
    const FilterResult f = filter(sys, testing::random_observations(sys, rng, 0.7));
    const SmootherResult s = smooth(sys, f);
    EXPECT_EQ(s.means.back(), f.steps.back().filtered_mean);
    EXPECT_EQ(s.covs.back(), f.steps.back().filtered_cov);
    EXPECT_EQ(s.ads.back(), f.steps.back().filtered_mean(static_cast<Eigen::Index>(sys.layout.factor)));
}

TEST(Kalman, RejectsObservationsTheSystemDoesNotDeclare) {
    const DfmSpec spec = testing::six_indicator_spec(ymd(2020, 1, 1), ymd(2020, 3, 31));
    const StateSpaceSystem sys = build_state_space(spec, DfmParams::defaults(spec));
    ObservationSet obs(sys.n_days());
    obs.add(10, 1, 0.5);  // monthly slot on 2020-01-11
    EXPECT_THROW(filter(sys, obs), SchemaError);
    EXPECT_THROW(log_likelihood(sys, obs), SchemaError);
    EXPECT_THROW(filter(sys, ObservationSet(sys.n_days() - 1)), ContractError);

    const FilterResult f = filter(sys, ObservationSet(sys.n_days()));
    const StateSpaceSystem other = build_state_space(spec, DfmParams::defaults(spec), Grid(ymd(2020, 1, 1), ymd(2020, 2, 1)));
    EXPECT_THROW(smooth(other, f), ContractError);
}

TEST(Kalman, ObservationSetContract) {
    ObservationSet obs(3);
    obs.add(1, 0, 1.0);
    EXPECT_THROW(obs.add(1, 0, 2.0), ValidationError);
    EXPECT_THROW(obs.add(2, 0, std::nan("")), ValidationError);
    EXPECT_EQ(obs.last_observed_day(), 1);
    EXPECT_TRUE(obs.remove(1, 0));
    EXPECT_FALSE(obs.remove(1, 0));
    EXPECT_FALSE(obs.last_observed_day().has_value());
}

TEST(Kalman, StationaryCovarianceSolvesLyapunov) {
    Matrix a(2, 2);
    a << 0.5, 0.2, 0.0, 0.3;
    Matrix q(2, 2);
    q << 1.0, 0.1, 0.1, 0.5;
    const Matrix p = stationary_covariance(a, q);
    EXPECT_LT((a * p * a.transpose() + q - p).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace nowcast
