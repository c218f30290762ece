#include "jkcov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "jkcov/error.hpp"

namespace jkcov {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value, std::size_t line) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        auto item = trim(value.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty()) throw ParseError(line, "empty list item");
        items.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::uint64_t to_uint(const std::string& text, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError(line, "expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

double to_double(const std::string& text, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError(line, "expected a finite number, got '" + text + "'");
    }
    return v;
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
        if (!cfg.entries_.emplace(key, Entry{value, line}).second) {
            throw ParseError(line, "duplicate key '" + key + "'");
        }
    }
    const auto version = cfg.get_uint("version");
    if (!version) throw ParseError(line, "missing required key 'version'");
    if (*version != static_cast<std::uint64_t>(kFormatVersion)) {
        throw ParseError(cfg.line_of("version"), "unsupported config version " + std::to_string(*version) +
                                                      " (expected " + std::to_string(kFormatVersion) + ")");
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config '" + path + "'");
    return parse(in);
}

const KeyValueConfig::Entry* KeyValueConfig::take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

std::size_t KeyValueConfig::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return e->value;
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return to_uint(e->value, e->line);
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return to_double(e->value, e->line);
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(e->line, "expected true or false for '" + key + "'");
}

std::optional<std::vector<std::string>> KeyValueConfig::get_list(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return split_list(e->value, e->line);
}

std::optional<std::vector<std::uint64_t>> KeyValueConfig::get_uint_list(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(e->value, e->line)) out.push_back(to_uint(item, e->line));
    return out;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_list(const std::string& key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_list(e->value, e->line)) out.push_back(to_double(item, e->line));
    return out;
}

void KeyValueConfig::reject_unknown() const {
    const std::string* first = nullptr;
    std::size_t line = 0;
    for (const auto& [key, entry] : entries_) {
        if (!entry.used && (!first || entry.line < line)) {
            first = &key;
            line = entry.line;
        }
    }
    if (first) throw ParseError(line, "unknown key '" + *first + "'");
}

} // namespace jkcov
