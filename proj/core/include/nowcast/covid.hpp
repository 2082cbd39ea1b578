#pragma once

#include "nowcast/calendar.hpp"
#include "nowcast/path.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nowcast {

/// Values on consecutive days starting at `start`. `filled[i]` marks values
/// carried forward over a gap in the raw input.
struct DailySeries {
    Date start{};
    std::vector<double> values;
    std::vector<bool> filled;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return add_days(start, static_cast<std::int64_t>(i)); }
    Date end() const { return date_at(values.size() - 1); }

    static DailySeries from_values(Date start, std::vector<double> values);
    static DailySeries from_path(const Path& path);
};

/// Reads `date,value` rows with strictly increasing dates. Missing days and
/// empty or NA values take the previous value and are flagged as filled.
DailySeries read_daily_series(const std::filesystem::path& file);

struct HpResult {
    DailySeries trend;
    DailySeries cycle;
};

inline constexpr double kDefaultDailyHpLambda = 1e7;

/// Hodrick-Prescott filter: the trend minimizes
/// sum (y - tau)^2 + lambda * sum (second difference of tau)^2.
HpResult hp_filter(const DailySeries& series, double lambda);

/// Value on day d becomes the input value on day d + k; the last k days drop off.
DailySeries lead(const DailySeries& series, int k);

/// Pearson correlation over the dates both series cover. Needs at least three
/// common days and nonzero variance in each series.
double correlate(const DailySeries& a, const DailySeries& b);

struct CovidComparison {
    std::vector<Date> dates;
    std::vector<double> ads;
    std::vector<double> deaths;  // led and smoothed
    double correlation = 0.0;
    int lead_days = 0;
    double lambda = 0.0;
};

/// Leads the deaths series by k days, HP-smooths the led series, aligns it
/// with the index and correlates the two.
CovidComparison covid_pipeline(const DailySeries& ads, const DailySeries& deaths, int k,
                               double lambda = kDefaultDailyHpLambda);

/// CSV with header `date,ads,deaths`.
std::string comparison_to_csv(const CovidComparison& c);

}  // namespace nowcast
