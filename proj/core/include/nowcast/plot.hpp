#pragma once

#include "nowcast/covid.hpp"
#include "nowcast/path.hpp"

#include <string>
#include <vector>

namespace nowcast {

struct ChartSeries {
    std::string label;
    std::vector<double> x;  // days since 1970-01-01
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;     // points instead of a polyline
    bool right_axis = false;  // scaled against the secondary axis
};

struct Chart {
    std::string title;
    std::string y_label;
    std::string y2_label;  // non-empty enables a secondary axis
    std::vector<ChartSeries> series;
    int width = 900;
    int height = 420;
};

/// Self-contained SVG document with date ticks along the horizontal axis.
std::string render_svg(const Chart& chart);

double chart_x(Date d);

/// Overlaid extracted paths, optionally with a recorded comparison path.
std::string paths_svg(const std::vector<Path>& paths, const Path* comparison = nullptr);
/// Last-day value per vintage, optionally over a recorded comparison path.
std::string dots_svg(const DotSeries& dots, const Path* comparison = nullptr);
/// Index against led, smoothed deaths on a secondary axis.
std::string comparison_svg(const CovidComparison& c);

}  // namespace nowcast
