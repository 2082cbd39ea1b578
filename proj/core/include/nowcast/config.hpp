#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nowcast {

/// Flat `key = value` text file. `#` starts a comment; blank lines are
/// ignored; keys keep their file order. Duplicate keys are an error.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text, const std::string& source = "<memory>");
    static KeyValueFile load(const std::filesystem::path& path);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    /// Throws ConfigError naming the source when the key is absent.
    const std::string& require(std::string_view key) const;
    double require_double(std::string_view key) const;
    std::optional<double> get_double(std::string_view key) const;
    std::optional<int> get_int(std::string_view key) const;

    void set(std::string key, std::string value);
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

    std::string to_string() const;
    void save(const std::filesystem::path& path) const;

private:
    std::string source_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Splits on commas and trims whitespace; empty items are dropped.
std::vector<std::string> split_list(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace nowcast
