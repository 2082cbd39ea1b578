#pragma once

#include "nowcast/calendar.hpp"

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

struct PathPoint {
    Date date;
    double ads;
    double std;
};

/// One vintage's extracted daily index over contiguous days.
struct Path {
    Timestamp vintage{};
    std::vector<PathPoint> points;
    /// Filtered factor mean on the last day, kept alongside the smoothed
    /// series; NaN when the path was read back from a file.
    double filtered_last = std::numeric_limits<double>::quiet_NaN();

    bool empty() const { return points.empty(); }
    Date first_date() const { return points.front().date; }
    Date last_date() const { return points.back().date; }
    double last_value() const { return points.back().ads; }
    std::optional<std::size_t> index_of(Date d) const;
};

/// CSV with header `date,ads,std`.
std::string path_to_csv(const Path& path);
Path path_from_csv(const std::filesystem::path& file);

struct Dot {
    Timestamp vintage;
    double ads;
};
using DotSeries = std::vector<Dot>;

/// CSV with header `vintage,ads`.
std::string dots_to_csv(const DotSeries& dots);
DotSeries dots_from_csv(const std::filesystem::path& file);

}  // namespace nowcast
