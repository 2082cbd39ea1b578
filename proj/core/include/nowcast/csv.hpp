#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nowcast {

struct CsvRow {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

/// Minimal comma-separated reader: no quoting, trims whitespace, skips blank
/// lines. The first non-blank line is the header.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    /// Throws ParseError unless the header equals `expected` exactly.
    void expect_header(const std::vector<std::string>& expected) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

/// Strict double parse (whole string must be consumed). Throws ValidationError.
double parse_double(std::string_view text);

/// Shortest round-trip representation; identical bits always give identical text.
std::string format_double(double value);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nowcast
