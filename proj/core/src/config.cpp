#include "nowcast/config.hpp"

#include "nowcast/csv.hpp"
#include "nowcast/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nowcast {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - pos));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

KeyValueFile KeyValueFile::parse(std::string_view text, const std::string& source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(source, line_no, "empty key");
        if (kv.has(key)) throw ParseError(source, line_no, "duplicate key '" + key + "'");
        kv.entries_.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

bool KeyValueFile::has(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const std::string& KeyValueFile::require(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    throw ConfigError(source_ + ": missing key '" + std::string(key) + "'");
}

double KeyValueFile::require_double(std::string_view key) const {
    const auto& v = require(key);
    try {
        return parse_double(v);
    } catch (const ValidationError&) {
        throw ConfigError(source_ + ": key '" + std::string(key) + "' is not a number: '" + v + "'");
    }
}

std::optional<double> KeyValueFile::get_double(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return require_double(key);
}

std::optional<int> KeyValueFile::get_int(std::string_view key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    try {
        std::size_t used = 0;
        const int out = std::stoi(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::exception&) {
        throw ConfigError(source_ + ": key '" + std::string(key) + "' is not an integer: '" + *v + "'");
    }
}

void KeyValueFile::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

std::string KeyValueFile::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void KeyValueFile::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << to_string();
}

}  // namespace nowcast
