#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nowcast {

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

enum class Frequency { daily, weekly, monthly, quarterly };

std::string_view to_string(Frequency f);
Frequency parse_frequency(std::string_view text);

/// Closed range of calendar dates [first, last].
struct DateRange {
    Date first;
    Date last;

    std::int64_t n_days() const;
    bool contains(Date d) const;
    friend bool operator==(const DateRange&, const DateRange&) = default;
};

/// Calendar period of the given frequency that contains `d`. Weekly periods
/// end on `week_end`; monthly and quarterly periods follow calendar
/// boundaries. Independent of any model grid.
DateRange calendar_period(Date d, Frequency f,
                          std::chrono::weekday week_end = std::chrono::Saturday);

/// A date together with its ordinal position on a model grid.
struct Day {
    Date date;
    std::int64_t index = 0;

    friend bool operator==(const Day&, const Day&) = default;
};

struct Period {
    Frequency frequency = Frequency::daily;
    Day start_day;
    Day end_day;
    std::int64_t n_days = 0;

    friend bool operator==(const Period&, const Period&) = default;
};

/// Gap-free daily grid [start, end]. Weekends and holidays are ordinary days.
class Grid {
public:
    Grid(Date start, Date end, std::chrono::weekday week_end = std::chrono::Saturday);

    Date start() const { return start_; }
    Date end() const { return end_; }
    std::chrono::weekday week_end() const { return week_end_; }
    std::int64_t size() const { return size_; }

    bool contains(Date d) const;
    /// Throws OutOfRangeError when `d` is outside the grid.
    Day day(Date d) const;
    Day at(std::int64_t index) const;

    /// Calendar period of `d`, without clipping to the grid.
    DateRange calendar_period(Date d, Frequency f) const;

private:
    Date start_;
    Date end_;
    std::chrono::weekday week_end_;
    std::int64_t size_;
};

/// Period of frequency `f` enclosing `day`, clipped to the grid so that the
/// periods of one frequency partition it. Throws OutOfRangeError if `day`
/// is not on the grid.
Period enclosing_period(const Grid& grid, const Day& day, Frequency f);

/// The n_days consecutive grid days of `period`.
std::vector<Day> period_days(const Grid& grid, const Period& period);

/// True when the period is not clipped by either grid edge.
bool is_complete(const Grid& grid, const Period& period);

std::int64_t days_between(Date from, Date to);
Date add_days(Date d, std::int64_t n);

/// ISO-8601 YYYY-MM-DD.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// Accepts YYYY-MM-DD, YYYY-MM-DDTHH:MM and YYYY-MM-DDTHH:MM:SS (a space may
/// replace the T). Output always uses the full seconds form.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
Date date_of(Timestamp ts);
/// End of day (23:59:59) of `d`.
Timestamp end_of_day(Date d);

std::chrono::weekday parse_weekday(std::string_view text);
std::string_view to_string(std::chrono::weekday w);

}  // namespace nowcast
