#pragma once

#include "nowcast/calendar.hpp"
#include "nowcast/path.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

/// A dated contraction: peak and trough months plus, where known, the dates
/// they were announced.
struct Episode {
    std::chrono::year_month peak;
    std::chrono::year_month trough;
    std::optional<Date> peak_announced;
    std::optional<Date> trough_announced;

    /// Months after the peak through the trough.
    int duration_months() const;
    /// First day of the month after the peak through the last day of the trough month.
    DateRange days() const;
};

/// The post-1960 U.S. business-cycle contractions.
const std::vector<Episode>& builtin_chronology();

/// Reads a CSV with header `peak,trough` and YYYY-MM values.
std::vector<Episode> read_chronology(const std::filesystem::path& file);

struct EpisodeSummary {
    Episode episode;
    bool covered = false;  // the path spans every day of the episode
    double depth = 0.0;    // |min ads| over the episode
    double severity = 0.0; // depth * duration
    Date trough_day{};     // earliest day attaining the minimum
    std::optional<Date> zero_crossing;
    /// The minimum is positive, so the index never fell below average.
    bool shallow_warning = false;
};

/// Months strictly after the peak through the trough. Throws ValidationError
/// when the trough precedes the peak.
int duration_months(std::chrono::year_month peak, std::chrono::year_month trough);

double severity(double depth, int duration);

/// |min ads| over `days`. Throws OutOfRangeError unless the path covers them.
double depth(const Path& path, const DateRange& days);

/// Earliest day in `days` attaining the minimum. Throws OutOfRangeError
/// unless the path covers them.
Date trough_day(const Path& path, const DateRange& days);

/// First day at or after `from` with ads >= 0, if the path has one.
std::optional<Date> zero_crossing_recovery(const Path& path, Date from);

EpisodeSummary summarize(const Path& path, const Episode& episode);
std::vector<EpisodeSummary> summarize(const Path& path, const std::vector<Episode>& episodes);

/// CSV with header `peak,trough,duration,depth,severity,trough_day,recovery_day`.
/// Uncovered episodes show NA for path-derived fields.
std::string summary_to_csv(const std::vector<EpisodeSummary>& rows);
/// Column-aligned plain-text version of the same table.
std::string summary_to_text(const std::vector<EpisodeSummary>& rows);

std::string format_year_month(std::chrono::year_month ym);
std::chrono::year_month parse_year_month(std::string_view text);

}  // namespace nowcast
