#include "nowcast/calendar.hpp"

#include "nowcast/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace nowcast {

using namespace std::chrono;

namespace {

sys_days to_sys(Date d) { return sys_days{d}; }

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError("invalid date/time '" + std::string(whole) + "'");
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(Frequency f) {
    switch (f) {
        case Frequency::daily: return "daily";
        case Frequency::weekly: return "weekly";
        case Frequency::monthly: return "monthly";
        case Frequency::quarterly: return "quarterly";
    }
    return "unknown";
}

Frequency parse_frequency(std::string_view text) {
    const std::string s = lower(text);
    if (s == "daily" || s == "d") return Frequency::daily;
    if (s == "weekly" || s == "w") return Frequency::weekly;
    if (s == "monthly" || s == "m") return Frequency::monthly;
    if (s == "quarterly" || s == "q") return Frequency::quarterly;
    throw ConfigError("unknown frequency '" + std::string(text) + "'");
}

std::int64_t DateRange::n_days() const { return days_between(first, last) + 1; }

bool DateRange::contains(Date d) const { return to_sys(d) >= to_sys(first) && to_sys(d) <= to_sys(last); }

std::int64_t days_between(Date from, Date to) { return (to_sys(to) - to_sys(from)).count(); }

Date add_days(Date d, std::int64_t n) { return Date{to_sys(d) + days{n}}; }

DateRange calendar_period(Date d, Frequency f, weekday week_end) {
    if (!d.ok()) throw ValidationError("invalid calendar date");
    switch (f) {
        case Frequency::daily:
            return {d, d};
        case Frequency::weekly: {
            const weekday wd{to_sys(d)};
            const auto forward = (week_end - wd).count();  // 0..6
            const Date last = add_days(d, forward);
            return {add_days(last, -6), last};
        }
        case Frequency::monthly: {
            const year_month_day first{d.year(), d.month(), day{1}};
            const year_month_day last{year_month_day_last{d.year(), month_day_last{d.month()}}};
            return {first, last};
        }
        case Frequency::quarterly: {
            const unsigned m = static_cast<unsigned>(d.month());
            const unsigned q_first = ((m - 1) / 3) * 3 + 1;
            const year_month_day first{d.year(), month{q_first}, day{1}};
            const year_month_day last{
                year_month_day_last{d.year(), month_day_last{month{q_first + 2}}}};
            return {first, last};
        }
    }
    throw ValidationError("unknown frequency");
}

Grid::Grid(Date start, Date end, weekday week_end)
    : start_(start), end_(end), week_end_(week_end), size_(days_between(start, end) + 1) {
    if (!start.ok() || !end.ok()) throw ConfigError("grid bounds are not valid dates");
    if (size_ < 1) {
        throw ConfigError("grid end " + format_date(end) + " precedes start " + format_date(start));
    }
}

bool Grid::contains(Date d) const { return to_sys(d) >= to_sys(start_) && to_sys(d) <= to_sys(end_); }

Day Grid::day(Date d) const {
    if (!contains(d)) {
        throw OutOfRangeError("date " + format_date(d) + " outside grid [" + format_date(start_) +
                              ", " + format_date(end_) + "]");
    }
    return Day{d, days_between(start_, d)};
}

Day Grid::at(std::int64_t index) const {
    if (index < 0 || index >= size_) {
        throw OutOfRangeError("grid index " + std::to_string(index) + " outside [0, " +
                              std::to_string(size_) + ")");
    }
    return Day{add_days(start_, index), index};
}

DateRange Grid::calendar_period(Date d, Frequency f) const {
    return nowcast::calendar_period(d, f, week_end_);
}

Period enclosing_period(const Grid& grid, const Day& day, Frequency f) {
    const Day checked = grid.day(day.date);
    if (checked.index != day.index) {
        throw OutOfRangeError("day index does not match its date on this grid");
    }
    const DateRange full = grid.calendar_period(day.date, f);
    const Date first = to_sys(full.first) < to_sys(grid.start()) ? grid.start() : full.first;
    const Date last = to_sys(full.last) > to_sys(grid.end()) ? grid.end() : full.last;
    Period p;
    p.frequency = f;
    p.start_day = grid.day(first);
    p.end_day = grid.day(last);
    p.n_days = p.end_day.index - p.start_day.index + 1;
    return p;
}

std::vector<Day> period_days(const Grid& grid, const Period& period) {
    std::vector<Day> out;
    out.reserve(static_cast<std::size_t>(period.n_days));
    for (std::int64_t i = period.start_day.index; i <= period.end_day.index; ++i) {
        out.push_back(grid.at(i));
    }
    return out;
}

bool is_complete(const Grid& grid, const Period& period) {
    return grid.calendar_period(period.start_day.date, period.frequency) ==
           DateRange{period.start_day.date, period.end_day.date};
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    const int d = parse_int(text.substr(8, 2), text);
    const Date out{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!out.ok()) throw ValidationError("invalid date '" + std::string(text) + "'");
    return out;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    if (text.size() < 10) throw ValidationError("invalid timestamp '" + std::string(text) + "'");
    const Date d = parse_date(text.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    if (text.size() > 10) {
        const char sep = text[10];
        const auto rest = text.substr(11);
        if ((sep != 'T' && sep != ' ') || (rest.size() != 5 && rest.size() != 8) || rest[2] != ':' ||
            (rest.size() == 8 && rest[5] != ':')) {
            throw ValidationError("invalid timestamp '" + std::string(text) + "'");
        }
        hh = parse_int(rest.substr(0, 2), text);
        mm = parse_int(rest.substr(3, 2), text);
        if (rest.size() == 8) ss = parse_int(rest.substr(6, 2), text);
        if (hh > 23 || mm > 59 || ss > 59) {
            throw ValidationError("invalid time of day in '" + std::string(text) + "'");
        }
    }
    return time_point_cast<seconds>(to_sys(d)) + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
    const auto dp = floor<days>(ts);
    const hh_mm_ss<seconds> tod{ts - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d", format_date(Date{dp}).c_str(),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

Date date_of(Timestamp ts) { return Date{floor<days>(ts)}; }

Timestamp end_of_day(Date d) {
    return time_point_cast<seconds>(to_sys(d)) + hours{23} + minutes{59} + seconds{59};
}

weekday parse_weekday(std::string_view text) {
    static constexpr std::array<std::string_view, 7> names{
        "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};
    const std::string s = lower(text);
    for (unsigned i = 0; i < names.size(); ++i) {
        if (s == names[i] || s == names[i].substr(0, 3)) return weekday{i};
    }
    throw ConfigError("unknown weekday '" + std::string(text) + "'");
}

std::string_view to_string(weekday w) {
    static constexpr std::array<std::string_view, 7> names{
        "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};
    return names[w.c_encoding()];
}

}  // namespace nowcast
