#include "nowcast/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nowcast {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

Date from_chart_x(double x) {
    return Date{std::chrono::sys_days{std::chrono::days{static_cast<long>(std::lround(x))}}};
}

}  // namespace

double chart_x(Date d) {
    return static_cast<double>(std::chrono::sys_days(d).time_since_epoch().count());
}

std::string render_svg(const Chart& chart) {
    const double left = 70, right = chart.y2_label.empty() ? 20 : 70, top = 40, bottom = 60;
    const double pw = chart.width - left - right;
    const double ph = chart.height - top - bottom;

    Range xr, yr, y2r;
    for (const auto& s : chart.series) {
        for (double x : s.x) xr.add(x);
        for (double y : s.y) (s.right_axis ? y2r : yr).add(y);
    }
    xr.finish();
    yr.finish();
    y2r.finish();

    const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](const Range& r, double y) { return top + (r.hi - y) / (r.hi - r.lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << chart.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(chart.title) << "</text>\n";
    svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const double ystep = nice_step(yr.hi - yr.lo, 6);
    for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi; v += ystep) {
        svg << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(py(yr, v))
            << "\" y2=\"" << num(py(yr, v)) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yr, v) + 4) << "\" text-anchor=\"end\">"
            << tick_label(v) << "</text>\n";
    }
    if (yr.lo < 0.0 && yr.hi > 0.0) {
        svg << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(py(yr, 0.0))
            << "\" y2=\"" << num(py(yr, 0.0)) << "\" stroke=\"#888\"/>\n";
    }
    if (!chart.y2_label.empty()) {
        const double step2 = nice_step(y2r.hi - y2r.lo, 6);
        for (double v = std::ceil(y2r.lo / step2) * step2; v <= y2r.hi; v += step2) {
            svg << "<text x=\"" << num(left + pw + 6) << "\" y=\"" << num(py(y2r, v) + 4) << "\">" << tick_label(v)
                << "</text>\n";
        }
        svg << "<text transform=\"translate(" << num(chart.width - 12.0) << ',' << num(top + ph / 2)
            << ") rotate(90)\" text-anchor=\"middle\">" << escape(chart.y2_label) << "</text>\n";
    }
    svg << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(chart.y_label) << "</text>\n";

    const double xstep = std::max(1.0, nice_step(xr.hi - xr.lo, 6));
    for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi; v += xstep) {
        svg << "<line x1=\"" << num(px(v)) << "\" x2=\"" << num(px(v)) << "\" y1=\"" << num(top + ph) << "\" y2=\""
            << num(top + ph + 4) << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << num(px(v)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
            << format_date(from_chart_x(v)) << "</text>\n";
    }

    double legend_y = top + 14;
    for (const auto& s : chart.series) {
        const Range& r = s.right_axis ? y2r : yr;
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                svg << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(r, s.y[i])) << "\" r=\"3\" fill=\""
                    << s.color << "\"/>\n";
            }
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\" points=\"";
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (std::isfinite(s.y[i])) svg << num(px(s.x[i])) << ',' << num(py(r, s.y[i])) << ' ';
            }
            svg << "\"/>\n";
        }
        if (!s.label.empty()) {
            svg << "<text x=\"" << num(left + 8) << "\" y=\"" << num(legend_y) << "\" fill=\"" << s.color << "\">"
                << escape(s.label) << "</text>\n";
            legend_y += 14;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

ChartSeries path_series(const Path& p, std::string label, std::string color) {
    ChartSeries s;
    s.label = std::move(label);
    s.color = std::move(color);
    for (const auto& pt : p.points) {
        s.x.push_back(chart_x(pt.date));
        s.y.push_back(pt.ads);
    }
    return s;
}

}  // namespace

std::string paths_svg(const std::vector<Path>& paths, const Path* comparison) {
    Chart chart;
    chart.title = "Extracted index by vintage";
    chart.y_label = "index";
    const bool label_each = paths.size() <= 8;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        chart.series.push_back(path_series(paths[i], label_each ? format_timestamp(paths[i].vintage) : "",
                                           kPalette[i % std::size(kPalette)]));
    }
    if (comparison) chart.series.push_back(path_series(*comparison, "recorded", "#000000"));
    return render_svg(chart);
}

std::string dots_svg(const DotSeries& dots, const Path* comparison) {
    Chart chart;
    chart.title = "Index on each vintage's last day";
    chart.y_label = "index";
    if (comparison) chart.series.push_back(path_series(*comparison, "recorded path", "#999999"));
    ChartSeries s;
    s.label = "vintage dots";
    s.color = "#d62728";
    s.markers = true;
    for (const auto& d : dots) {
        s.x.push_back(chart_x(date_of(d.vintage)));
        s.y.push_back(d.ads);
    }
    chart.series.push_back(std::move(s));
    return render_svg(chart);
}

std::string comparison_svg(const CovidComparison& c) {
    Chart chart;
    chart.title = "Index and smoothed deaths led " + std::to_string(c.lead_days) + " days";
    chart.y_label = "index";
    chart.y2_label = "deaths (smoothed)";
    ChartSeries a{"index", {}, c.ads, "#1f77b4", false, false};
    ChartSeries b{"deaths", {}, c.deaths, "#d62728", false, true};
    for (const auto d : c.dates) {
        a.x.push_back(chart_x(d));
        b.x.push_back(chart_x(d));
    }
    chart.series.push_back(std::move(a));
    chart.series.push_back(std::move(b));
    return render_svg(chart);
}

}  // namespace nowcast
