#include "nowcast/covid.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nowcast {

using std::chrono::sys_days;

DailySeries DailySeries::from_values(Date start, std::vector<double> values) {
    DailySeries s;
    s.start = start;
    s.filled.assign(values.size(), false);
    s.values = std::move(values);
    return s;
}

DailySeries DailySeries::from_path(const Path& path) {
    if (path.empty()) throw ValidationError("path is empty");
    std::vector<double> v;
    v.reserve(path.points.size());
    for (const auto& p : path.points) v.push_back(p.ads);
    return from_values(path.first_date(), std::move(v));
}

DailySeries read_daily_series(const std::filesystem::path& file) {
    const CsvTable table = read_csv(file);
    table.expect_header({"date", "value"});
    DailySeries s;
    bool have_prev = false;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2) throw ParseError(table.source, row.line, "expected 2 fields");
        try {
            const Date d = parse_date(row.fields[0]);
            const bool missing = row.fields[1].empty() || row.fields[1] == "NA";
            if (!have_prev) {
                if (missing) throw ValidationError("first row needs a value");
                s.start = d;
                s.values.push_back(parse_double(row.fields[1]));
                s.filled.push_back(false);
                have_prev = true;
                continue;
            }
            const auto gap = days_between(s.end(), d);
            if (gap < 1) throw ValidationError("dates must be strictly increasing");
            for (std::int64_t i = 1; i < gap; ++i) {
                s.values.push_back(s.values.back());
                s.filled.push_back(true);
            }
            s.values.push_back(missing ? s.values.back() : parse_double(row.fields[1]));
            s.filled.push_back(missing);
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    if (!have_prev) throw ValidationError(table.source + ": no data rows");
    return s;
}

HpResult hp_filter(const DailySeries& series, double lambda) {
    const auto n = static_cast<Eigen::Index>(series.size());
    if (n < 3) throw ValidationError("HP filter needs at least three observations");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("HP smoothing parameter must be positive");

    // tau = y - D'w with (D D' + I/lambda) w = D y, where D takes second
    // differences. Same solution as (I + lambda D'D) tau = y, but stays well
    // conditioned for very large lambda.
    const Eigen::Index m = n - 2;
    const Eigen::Map<const Eigen::VectorXd> y(series.values.data(), n);
    Eigen::VectorXd dy(m);
    for (Eigen::Index i = 0; i < m; ++i) dy(i) = y(i) - 2.0 * y(i + 1) + y(i + 2);

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(5 * m));
    const double ridge = 1.0 / lambda;
    for (Eigen::Index i = 0; i < m; ++i) {
        entries.emplace_back(i, i, 6.0 + ridge);
        if (i + 1 < m) {
            entries.emplace_back(i, i + 1, -4.0);
            entries.emplace_back(i + 1, i, -4.0);
        }
        if (i + 2 < m) {
            entries.emplace_back(i, i + 2, 1.0);
            entries.emplace_back(i + 2, i, 1.0);
        }
    }
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw NumericalError("HP system is singular");
    const Eigen::VectorXd w = ldlt.solve(dy);
    if (ldlt.info() != Eigen::Success || !w.allFinite()) throw NumericalError("HP solve failed");

    HpResult out;
    out.trend = DailySeries::from_values(series.start, std::vector<double>(series.values));
    out.trend.filled = series.filled;
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.trend.values[k] -= w(i);
        out.trend.values[k + 1] += 2.0 * w(i);
        out.trend.values[k + 2] -= w(i);
    }
    out.cycle = out.trend;
    for (std::size_t i = 0; i < series.size(); ++i) out.cycle.values[i] = series.values[i] - out.trend.values[i];
    return out;
}

DailySeries lead(const DailySeries& series, int k) {
    if (k < 0) throw ValidationError("lead must be non-negative");
    if (static_cast<std::size_t>(k) >= series.size()) throw ValidationError("lead is not shorter than the series");
    DailySeries out;
    out.start = series.start;
    out.values.assign(series.values.begin() + k, series.values.end());
    out.filled.assign(series.filled.begin() + k, series.filled.end());
    return out;
}

namespace {

struct Overlap {
    Date first;
    std::size_t offset_a;
    std::size_t offset_b;
    std::size_t length;
};

Overlap overlap(const DailySeries& a, const DailySeries& b) {
    if (a.values.empty() || b.values.empty()) return Overlap{a.start, 0, 0, 0};
    const Date first = sys_days(a.start) > sys_days(b.start) ? a.start : b.start;
    const Date last = sys_days(a.end()) < sys_days(b.end()) ? a.end() : b.end();
    const auto len = days_between(first, last) + 1;
    if (len <= 0) return Overlap{first, 0, 0, 0};
    return Overlap{first, static_cast<std::size_t>(days_between(a.start, first)),
                   static_cast<std::size_t>(days_between(b.start, first)), static_cast<std::size_t>(len)};
}

}  // namespace

double correlate(const DailySeries& a, const DailySeries& b) {
    const Overlap o = overlap(a, b);
    if (o.length < 3) throw ValidationError("series share fewer than three days");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < o.length; ++i) {
        ma += a.values[o.offset_a + i];
        mb += b.values[o.offset_b + i];
    }
    ma /= static_cast<double>(o.length);
    mb /= static_cast<double>(o.length);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < o.length; ++i) {
        const double da = a.values[o.offset_a + i] - ma;
        const double db = b.values[o.offset_b + i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) throw ValidationError("correlation is undefined for a constant series");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CovidComparison covid_pipeline(const DailySeries& ads, const DailySeries& deaths, int k, double lambda) {
    const DailySeries smoothed = hp_filter(lead(deaths, k), lambda).trend;
    CovidComparison c;
    c.correlation = correlate(ads, smoothed);
    c.lead_days = k;
    c.lambda = lambda;
    const Overlap o = overlap(ads, smoothed);
    for (std::size_t i = 0; i < o.length; ++i) {
        c.dates.push_back(add_days(o.first, static_cast<std::int64_t>(i)));
        c.ads.push_back(ads.values[o.offset_a + i]);
        c.deaths.push_back(smoothed.values[o.offset_b + i]);
    }
    return c;
}

std::string comparison_to_csv(const CovidComparison& c) {
    std::ostringstream out;
    out << "date,ads,deaths\n";
    for (std::size_t i = 0; i < c.dates.size(); ++i) {
        out << format_date(c.dates[i]) << ',' << format_double(c.ads[i]) << ',' << format_double(c.deaths[i]) << '\n';
    }
    return out.str();
}

}  // namespace nowcast
