#include <nowcast/calendar.hpp>
#include <nowcast/error.hpp>

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nowcast {
namespace {

using testing::ymd;
using std::chrono::sys_days;

TEST(Calendar, LeapFebruaryHas29Days) {
    const Grid grid(ymd(2020, 1, 1), ymd(2020, 12, 31));
    const Period p = enclosing_period(grid, grid.day(ymd(2020, 2, 15)), Frequency::monthly);
    EXPECT_EQ(p.n_days, 29);
    EXPECT_EQ(p.start_day.date, ymd(2020, 2, 1));
    EXPECT_EQ(p.end_day.date, ymd(2020, 2, 29));
    EXPECT_EQ(period_days(grid, p).size(), 29u);
}

TEST(Calendar, NonLeapFebruaryHas28Days) {
    const Grid grid(ymd(2021, 1, 1), ymd(2021, 12, 31));
    const Period p = enclosing_period(grid, grid.day(ymd(2021, 2, 10)), Frequency::monthly);
    EXPECT_EQ(p.n_days, 28);
    EXPECT_EQ(period_days(grid, p).size(), 28u);
}

TEST(Calendar, SecondQuarterHas91Days) {
    const Grid grid(ymd(2020, 1, 1), ymd(2020, 12, 31));
    const Period p = enclosing_period(grid, grid.day(ymd(2020, 4, 1)), Frequency::quarterly);
    EXPECT_EQ(p.n_days, 91);
    EXPECT_EQ(p.end_day.date, ymd(2020, 6, 30));
}

TEST(Calendar, ClaimsWeekEndsSaturday) {
    const Grid grid(ymd(2020, 1, 1), ymd(2020, 12, 31));
    const Period p = enclosing_period(grid, grid.day(ymd(2020, 3, 14)), Frequency::weekly);
    EXPECT_EQ(p.end_day.date, ymd(2020, 3, 14));
    EXPECT_EQ(p.start_day.date, ymd(2020, 3, 8));

    const Period next = enclosing_period(grid, grid.day(ymd(2020, 3, 16)), Frequency::weekly);
    const auto days = period_days(grid, next);
    ASSERT_EQ(days.size(), 7u);
    EXPECT_EQ(days.back().date, ymd(2020, 3, 21));
    for (std::size_t i = 1; i < days.size(); ++i) EXPECT_EQ(days[i].index, days[i - 1].index + 1);
}

TEST(Calendar, ConfigurableWeekEnd) {
    const DateRange w = calendar_period(ymd(2020, 3, 14), Frequency::weekly, std::chrono::Friday);
    EXPECT_EQ(w.last, ymd(2020, 3, 20));
    EXPECT_EQ(w.first, ymd(2020, 3, 14));
}

TEST(Calendar, OutsideGridThrows) {
    const Grid grid(ymd(2020, 1, 1), ymd(2020, 1, 31));
    EXPECT_THROW((void)grid.day(ymd(2020, 2, 1)), OutOfRangeError);
    EXPECT_THROW((void)grid.at(31), OutOfRangeError);
    EXPECT_THROW(Grid(ymd(2020, 2, 1), ymd(2020, 1, 1)), ConfigError);
}

TEST(Calendar, EdgePeriodsAreClipped) {
    const Grid grid(ymd(2020, 1, 15), ymd(2020, 3, 10));
    const Period first = enclosing_period(grid, grid.at(0), Frequency::monthly);
    EXPECT_EQ(first.n_days, 17);
    EXPECT_FALSE(is_complete(grid, first));
    const Period feb = enclosing_period(grid, grid.day(ymd(2020, 2, 3)), Frequency::monthly);
    EXPECT_TRUE(is_complete(grid, feb));
}

TEST(Calendar, PeriodsPartitionTheGrid) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> offset(0, 3000);
    for (int rep = 0; rep < 20; ++rep) {
        const Date start = add_days(ymd(2000, 1, 1), offset(rng));
        const Grid grid(start, add_days(start, 400));
        for (const auto f : {Frequency::daily, Frequency::weekly, Frequency::monthly, Frequency::quarterly}) {
            std::vector<int> hits(static_cast<std::size_t>(grid.size()), 0);
            std::int64_t t = 0;
            std::int64_t previous_end = -1;
            while (t < grid.size()) {
                const Period p = enclosing_period(grid, grid.at(t), f);
                EXPECT_EQ(p.start_day.index, t);
                EXPECT_GT(p.end_day.index, previous_end);
                EXPECT_EQ(p.n_days, p.end_day.index - p.start_day.index + 1);
                for (const Day& d : period_days(grid, p)) {
                    ++hits[static_cast<std::size_t>(d.index)];
                    // Round trip: every day of a period maps back to it.
                    EXPECT_EQ(enclosing_period(grid, d, f), p);
                }
                previous_end = p.end_day.index;
                t = p.end_day.index + 1;
            }
            for (int h : hits) EXPECT_EQ(h, 1);
        }
    }
}

TEST(Calendar, DateAndTimestampText) {
    EXPECT_EQ(format_date(parse_date("2020-02-29")), "2020-02-29");
    EXPECT_THROW(parse_date("2021-02-29"), ValidationError);
    EXPECT_THROW(parse_date("2020/01/01"), ValidationError);
    EXPECT_EQ(format_timestamp(parse_timestamp("2020-03-17T09:15")), "2020-03-17T09:15:00");
    EXPECT_EQ(format_timestamp(parse_timestamp("2020-03-17 09:15:30")), "2020-03-17T09:15:30");
    EXPECT_EQ(format_timestamp(parse_timestamp("2020-03-17")), "2020-03-17T00:00:00");
    EXPECT_EQ(date_of(parse_timestamp("2020-03-17T23:59:59")), ymd(2020, 3, 17));
    EXPECT_THROW(parse_timestamp("2020-03-17T25:00"), ValidationError);
    EXPECT_EQ(days_between(ymd(2020, 2, 28), ymd(2020, 3, 1)), 2);
    EXPECT_EQ(add_days(ymd(2019, 12, 31), 1), ymd(2020, 1, 1));
}

TEST(Calendar, FrequencyAndWeekdayNames) {
    for (const auto f : {Frequency::daily, Frequency::weekly, Frequency::monthly, Frequency::quarterly}) {
        EXPECT_EQ(parse_frequency(to_string(f)), f);
    }
    EXPECT_THROW(parse_frequency("annual"), ValidationError);
    EXPECT_EQ(parse_weekday("saturday"), std::chrono::Saturday);
    EXPECT_EQ(parse_weekday(to_string(std::chrono::Wednesday)), std::chrono::Wednesday);
}

}  // namespace
}  // namespace nowcast
