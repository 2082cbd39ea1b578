#pragma once

#include <nowcast/covid.hpp>
#include <nowcast/model.hpp>
#include <nowcast/state_space.hpp>
#include <nowcast/vintage.hpp>

#include <filesystem>
#include <random>
#include <vector>

namespace nowcast::testing {

std::filesystem::path data_dir();

Date ymd(int y, unsigned m, unsigned d);

/// Random time-varying system with state dimension <= max_state and up to
/// three observable slots. Transition matrices are stable and the prior is
/// proper.
StateSpaceSystem random_system(std::mt19937_64& rng, std::int64_t days, std::size_t max_state = 6);

/// Keeps each declared (day, slot) with probability `keep` and draws its value
/// from a standard normal.
ObservationSet random_observations(const StateSpaceSystem& sys, std::mt19937_64& rng, double keep);

/// Small daily/weekly model whose state dimension stays within six.
DfmSpec random_small_spec(std::mt19937_64& rng, Date start, std::int64_t days);
DfmParams random_params(const DfmSpec& spec, std::mt19937_64& rng);

/// Weekly claims, four monthly series and quarterly output, all in levels.
DfmSpec six_indicator_spec(Date start, Date end);

/// Two-indicator design used for parameter recovery: daily AR(1) factor,
/// weekly flow with iid noise and monthly flow with AR(1) noise.
DfmSpec recovery_spec();
DfmParams recovery_truth(const DfmSpec& spec);

/// Release log for a simulated panel. With `revision_sd > 0` every point is
/// released twice: a noisy first print followed by the true value
/// `revision_lag` days later.
std::vector<ReleaseEvent> synthetic_releases(const DfmSpec& spec, const DfmParams& params, std::uint64_t seed,
                                             int delay_days, double revision_sd = 0.0, int revision_lag = 30);

struct PandemicFixture {
    DfmSpec spec;
    FittedModel model;
    VintageDataset history;
    std::vector<VintageDataset> vintages;
};

/// The pandemic-era release calendar with synthetic values, replayed on top
/// of a quiet pre-2020 history.
PandemicFixture load_pandemic_fixture();

/// Smooth index over two years with a one-year cycle.
DailySeries covid_index_fixture();
/// deaths(d) = -index(d - k) plus a weekly calendar pattern and small noise.
DailySeries covid_deaths_fixture(const DailySeries& index, int k, std::uint64_t seed = 11);

}  // namespace nowcast::testing
