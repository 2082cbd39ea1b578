#include "nowcast/path.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"

#include <sstream>

namespace nowcast {

std::optional<std::size_t> Path::index_of(Date d) const {
    if (points.empty()) return std::nullopt;
    const auto offset = days_between(first_date(), d);
    if (offset < 0 || offset >= static_cast<std::int64_t>(points.size())) return std::nullopt;
    return static_cast<std::size_t>(offset);
}

std::string path_to_csv(const Path& path) {
    std::ostringstream out;
    out << "date,ads,std\n";
    for (const auto& p : path.points) {
        out << format_date(p.date) << ',' << format_double(p.ads) << ',' << format_double(p.std) << '\n';
    }
    return out.str();
}

Path path_from_csv(const std::filesystem::path& file) {
    const CsvTable table = read_csv(file);
    table.expect_header({"date", "ads", "std"});
    Path path;
    path.points.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.fields.size() != 3) throw ParseError(table.source, row.line, "expected 3 fields");
        try {
            PathPoint p{parse_date(row.fields[0]), parse_double(row.fields[1]), parse_double(row.fields[2])};
            if (!path.points.empty() && days_between(path.points.back().date, p.date) != 1) {
                throw ValidationError("dates must be consecutive days");
            }
            path.points.push_back(p);
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    return path;
}

std::string dots_to_csv(const DotSeries& dots) {
    std::ostringstream out;
    out << "vintage,ads\n";
    for (const auto& d : dots) out << format_timestamp(d.vintage) << ',' << format_double(d.ads) << '\n';
    return out.str();
}

DotSeries dots_from_csv(const std::filesystem::path& file) {
    const CsvTable table = read_csv(file);
    table.expect_header({"vintage", "ads"});
    DotSeries dots;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2) throw ParseError(table.source, row.line, "expected 2 fields");
        try {
            dots.push_back(Dot{parse_timestamp(row.fields[0]), parse_double(row.fields[1])});
        } catch (const ValidationError& e) {
            throw ParseError(table.source, row.line, e.what());
        }
    }
    return dots;
}

}  // namespace nowcast
