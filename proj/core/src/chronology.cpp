#include "nowcast/chronology.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nowcast {

namespace {

using namespace std::chrono;

Episode episode(int py, unsigned pm, int ty, unsigned tm, std::optional<Date> pa = {}, std::optional<Date> ta = {}) {
    return Episode{year(py) / month(pm), year(ty) / month(tm), pa, ta};
}

Date ymd(int y, unsigned m, unsigned d) { return year(y) / month(m) / day(d); }

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

int duration_months(year_month peak, year_month trough) {
    const auto n = (trough - peak).count();
    if (n < 0) {
        throw ValidationError("trough " + format_year_month(trough) + " precedes peak " + format_year_month(peak));
    }
    return static_cast<int>(n);
}

double severity(double depth, int duration) { return depth * duration; }

int Episode::duration_months() const { return nowcast::duration_months(peak, trough); }

DateRange Episode::days() const {
    const year_month first = peak + months(1);
    return DateRange{first / 1d, trough / std::chrono::last};
}

const std::vector<Episode>& builtin_chronology() {
    static const std::vector<Episode> table = {
        episode(1960, 4, 1961, 2),
        episode(1969, 12, 1970, 11),
        episode(1973, 11, 1975, 3),
        episode(1980, 1, 1980, 7, ymd(1980, 6, 3), ymd(1981, 7, 8)),
        episode(1981, 7, 1982, 11, ymd(1982, 1, 6), ymd(1983, 7, 8)),
        episode(1990, 7, 1991, 3, ymd(1991, 4, 25), ymd(1992, 12, 22)),
        episode(2001, 3, 2001, 11, ymd(2001, 11, 26), ymd(2003, 7, 17)),
        episode(2007, 12, 2009, 6, ymd(2008, 12, 1), ymd(2010, 9, 20)),
        episode(2020, 2, 2020, 4, ymd(2020, 6, 6), ymd(2021, 7, 19)),
    };
    return table;
}

std::string format_year_month(year_month ym) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()), static_cast<unsigned>(ym.month()));
    return buf;
}

year_month parse_year_month(std::string_view text) {
    const Date d = parse_date(std::string(text) + "-01");
    return d.year() / d.month();
}

std::vector<Episode> read_chronology(const std::filesystem::path& file) {
    const CsvTable table = read_csv(file);
    table.expect_header({"peak", "trough"});
    std::vector<Episode> out;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2) throw ParseError(table.source, row.line, "expected 2 fields");
        try {
            Episode e{parse_year_month(row.fields[0]), parse_year_month(row.fields[1]), {}, {}};
            if (e.duration_months() < 1) throw ValidationError("trough must come after the peak");
            out.push_back(e);
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    return out;
}

std::optional<Date> zero_crossing_recovery(const Path& path, Date from) {
    for (const auto& p : path.points) {
        if (sys_days(p.date) >= sys_days(from) && p.ads >= 0.0) return p.date;
    }
    return std::nullopt;
}

namespace {

std::optional<std::size_t> argmin_within(const Path& path, const DateRange& days) {
    const auto first = path.index_of(days.first);
    const auto last = path.index_of(days.last);
    if (!first || !last) return std::nullopt;
    std::size_t best = *first;
    for (std::size_t i = *first; i <= *last; ++i) {
        if (path.points[i].ads < path.points[best].ads) best = i;
    }
    return best;
}

std::size_t require_argmin(const Path& path, const DateRange& days) {
    const auto i = argmin_within(path, days);
    if (!i) {
        throw OutOfRangeError("path does not cover " + format_date(days.first) + " to " + format_date(days.last));
    }
    return *i;
}

}  // namespace

double depth(const Path& path, const DateRange& days) { return std::abs(path.points[require_argmin(path, days)].ads); }

Date trough_day(const Path& path, const DateRange& days) { return path.points[require_argmin(path, days)].date; }

EpisodeSummary summarize(const Path& path, const Episode& episode) {
    EpisodeSummary s;
    s.episode = episode;
    const auto argmin = argmin_within(path, episode.days());
    if (!argmin) return s;
    s.covered = true;
    const double minimum = path.points[*argmin].ads;
    s.trough_day = path.points[*argmin].date;
    s.depth = std::abs(minimum);
    s.severity = severity(s.depth, episode.duration_months());
    s.shallow_warning = minimum > 0.0;
    s.zero_crossing = zero_crossing_recovery(path, s.trough_day);
    return s;
}

std::vector<EpisodeSummary> summarize(const Path& path, const std::vector<Episode>& episodes) {
    std::vector<EpisodeSummary> out;
    out.reserve(episodes.size());
    for (const auto& e : episodes) out.push_back(summarize(path, e));
    return out;
}

namespace {

std::vector<std::vector<std::string>> summary_cells(const std::vector<EpisodeSummary>& rows, bool rounded) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"peak", "trough", "duration", "depth", "severity", "trough_day", "recovery_day"});
    for (const auto& r : rows) {
        std::vector<std::string> line{format_year_month(r.episode.peak), format_year_month(r.episode.trough),
                                      std::to_string(r.episode.duration_months())};
        if (r.covered) {
            line.push_back(rounded ? fixed(r.depth, 2) : format_double(r.depth));
            line.push_back(rounded ? fixed(r.severity, 2) : format_double(r.severity));
            line.push_back(format_date(r.trough_day));
            line.push_back(r.zero_crossing ? format_date(*r.zero_crossing) : "NA");
        } else {
            line.insert(line.end(), {"NA", "NA", "NA", "NA"});
        }
        cells.push_back(std::move(line));
    }
    return cells;
}

}  // namespace

std::string summary_to_csv(const std::vector<EpisodeSummary>& rows) {
    std::ostringstream out;
    for (const auto& line : summary_cells(rows, false)) {
        for (std::size_t i = 0; i < line.size(); ++i) out << (i ? "," : "") << line[i];
        out << '\n';
    }
    return out.str();
}

std::string summary_to_text(const std::vector<EpisodeSummary>& rows) {
    const auto cells = summary_cells(rows, true);
    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t i = 0; i < cells[r].size(); ++i) {
            if (i) out << "  ";
            out << std::string(width[i] - cells[r][i].size(), ' ') << cells[r][i];
        }
        if (r > 0 && rows[r - 1].covered && rows[r - 1].shallow_warning) out << "  (minimum above zero)";
        out << '\n';
    }
    return out.str();
}

}  // namespace nowcast
