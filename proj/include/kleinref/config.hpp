#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kleinref/errors.hpp"

// Flat key=value configuration: one assignment per line, '#' comments,
// dotted keys ("grid.nx"). Lookups remember which keys were touched so a
// scenario can reject settings it never read instead of ignoring typos.

namespace kleinref {

namespace detail {

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

[[nodiscard]] inline double parse_double_strict(std::string_view text, const std::string& what) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(what + ": cannot parse '" + std::string(text) + "' as a number");
    return value;
}

template <typename Int>
[[nodiscard]] Int parse_int_strict(std::string_view text, const std::string& what) {
    const std::string_view t = trim(text);
    Int value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(what + ": cannot parse '" + std::string(text) + "' as an integer");
    return value;
}

} // namespace detail

class KeyValueConfig {
public:
    KeyValueConfig() = default;

    [[nodiscard]] static KeyValueConfig from_text(std::string_view text) {
        KeyValueConfig cfg;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            const std::string_view line =
                text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
            ++line_no;
            cfg.parse_line(line, line_no);
            if (eol == std::string_view::npos) break;
            pos = eol + 1;
        }
        return cfg;
    }

    [[nodiscard]] static KeyValueConfig from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad())
            throw IoError("failed reading config file '" + path.string() + "'");
        try {
            return from_text(buf.str());
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }

    // Apply one "key=value" override (the CLI --set form).
    void set_assignment(std::string_view assignment) {
        const std::size_t eq = assignment.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
        const std::string key{detail::trim(assignment.substr(0, eq))};
        if (key.empty())
            throw ConfigError("override '" + std::string(assignment) + "' has an empty key");
        values_[key] = std::string(detail::trim(assignment.substr(eq + 1)));
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    [[nodiscard]] double get_double(const std::string& key, double fallback) const {
        const auto it = touch(key);
        if (it == values_.end()) return fallback;
        return detail::parse_double_strict(it->second, "config key '" + key + "'");
    }

    [[nodiscard]] int get_int(const std::string& key, int fallback) const {
        const auto it = touch(key);
        if (it == values_.end()) return fallback;
        return detail::parse_int_strict<int>(it->second, "config key '" + key + "'");
    }

    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        const auto it = touch(key);
        if (it == values_.end()) return fallback;
        return detail::parse_int_strict<std::uint64_t>(it->second, "config key '" + key + "'");
    }

    [[nodiscard]] std::string get_string(const std::string& key, std::string fallback) const {
        const auto it = touch(key);
        if (it == values_.end()) return fallback;
        return it->second;
    }

    // Comma-separated list of numbers.
    [[nodiscard]] std::vector<double> get_double_list(const std::string& key,
                                                      std::vector<double> fallback) const {
        const auto it = touch(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        std::string_view rest = it->second;
        while (true) {
            const std::size_t comma = rest.find(',');
            const std::string_view item =
                comma == std::string_view::npos ? rest : rest.substr(0, comma);
            out.push_back(detail::parse_double_strict(item, "config key '" + key + "'"));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    // Reject settings that no lookup consumed (typos, keys for another
    // scenario). Call once after a scenario has read everything it wants.
    void reject_untouched(const std::string& context) const {
        for (const auto& [key, value] : values_)
            if (touched_.count(key) == 0)
                throw ConfigError(context + ": unknown config key '" + key + "'");
    }

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return values_; }

private:
    void parse_line(std::string_view line, std::size_t line_no) {
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) return;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                              std::string(line) + "'");
        const std::string key{detail::trim(line.substr(0, eq))};
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        values_[key] = std::string(detail::trim(line.substr(eq + 1)));
    }

    [[nodiscard]] std::map<std::string, std::string>::const_iterator touch(const std::string& key) const {
        touched_.insert(key);
        return values_.find(key);
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> touched_;
};

} // namespace kleinref
