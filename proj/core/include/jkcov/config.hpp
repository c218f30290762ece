#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jkcov {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored; keys may not repeat. Values are read through typed accessors that
/// record which keys were used so leftovers can be rejected.
class KeyValueConfig {
public:
    static constexpr int kFormatVersion = 1;

    /// Parses and checks that `version` is present and equals kFormatVersion.
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key);
    std::optional<std::uint64_t> get_uint(const std::string& key);
    std::optional<double> get_double(const std::string& key);
    std::optional<bool> get_bool(const std::string& key);
    /// Comma-separated list; empty items are errors.
    std::optional<std::vector<std::string>> get_list(const std::string& key);
    std::optional<std::vector<std::uint64_t>> get_uint_list(const std::string& key);
    std::optional<std::vector<double>> get_double_list(const std::string& key);

    /// Throws ParseError naming the first key that no accessor consumed.
    void reject_unknown() const;

    std::size_t line_of(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        std::size_t line = 0;
        bool used = false;
    };

    const Entry* take(const std::string& key);

    std::map<std::string, Entry> entries_;
};

} // namespace jkcov
