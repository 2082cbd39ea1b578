#include "nowcast/csv.hpp"

#include "nowcast/config.hpp"
#include "nowcast/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nowcast {

void CsvTable::expect_header(const std::vector<std::string>& expected) const {
    if (header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw ParseError(source, 1, "expected header '" + want + "'");
    }
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
    CsvTable table;
    table.source = source;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool have_header = false;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        table.rows.push_back(CsvRow{line_no, std::move(fields)});
    }
    if (!have_header) throw ParseError(source, 1, "missing header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path.string());
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError("invalid number '" + std::string(text) + "'");
    }
    return value;
}

std::string format_double(double value) {
    if (value == 0.0) return "0";  // folds -0 into 0
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace nowcast
