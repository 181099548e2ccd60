#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "raresynth/errors.hpp"
#include "raresynth/table.hpp"  // read_file, trim_copy

namespace raresynth {

// Minimal TOML subset used by run configs and column-mapping files:
// [section] and [dotted.section] headers, bare or quoted keys, scalar values
// (string, integer, float, boolean) and flat arrays of scalars, # comments.
struct TomlValue {
    std::variant<std::string, std::int64_t, double, bool, std::vector<TomlValue>> v;

    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_double() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<TomlValue>>(v); }
};

class TomlFile {
  public:
    // Flat key space: "section.key" (keys keep their verbatim spelling, so
    // quoted keys containing dots or spaces are safe).
    std::map<std::string, TomlValue> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (!it->second.is_string())
            throw Error(Errc::invalid_config, "'" + key + "' must be a string");
        return std::get<std::string>(it->second.v);
    }

    std::optional<std::int64_t> get_int(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (!it->second.is_int())
            throw Error(Errc::invalid_config, "'" + key + "' must be an integer");
        return std::get<std::int64_t>(it->second.v);
    }

    std::optional<double> get_double(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (it->second.is_int()) return static_cast<double>(std::get<std::int64_t>(it->second.v));
        if (!it->second.is_double())
            throw Error(Errc::invalid_config, "'" + key + "' must be a number");
        return std::get<double>(it->second.v);
    }

    std::optional<bool> get_bool(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (!it->second.is_bool())
            throw Error(Errc::invalid_config, "'" + key + "' must be a boolean");
        return std::get<bool>(it->second.v);
    }

    std::optional<std::vector<double>> get_double_array(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (!it->second.is_array())
            throw Error(Errc::invalid_config, "'" + key + "' must be an array");
        std::vector<double> out;
        for (const auto& e : std::get<std::vector<TomlValue>>(it->second.v)) {
            if (e.is_int())
                out.push_back(static_cast<double>(std::get<std::int64_t>(e.v)));
            else if (e.is_double())
                out.push_back(std::get<double>(e.v));
            else
                throw Error(Errc::invalid_config, "'" + key + "' must contain only numbers");
        }
        return out;
    }

    // All keys that start with `prefix`, with the prefix stripped.
    std::vector<std::pair<std::string, TomlValue>> entries_with_prefix(
        const std::string& prefix) const {
        std::vector<std::pair<std::string, TomlValue>> out;
        for (const auto& [k, v] : values)
            if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0)
                out.emplace_back(k.substr(prefix.size()), v);
        return out;
    }
};

namespace detail {

inline void toml_fail(std::size_t line, const std::string& what) {
    throw Error(Errc::parse_failure, "TOML line " + std::to_string(line) + ": " + what);
}

// Parses one scalar or array token; `s` is pre-trimmed.
inline TomlValue parse_toml_value(const std::string& s, std::size_t line) {
    if (s.empty()) toml_fail(line, "missing value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') toml_fail(line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            char ch = s[i];
            if (ch == '\\') {
                if (i + 2 >= s.size()) toml_fail(line, "dangling escape");
                char esc = s[++i];
                switch (esc) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    default: toml_fail(line, "unsupported escape");
                }
            } else if (ch == '"') {
                toml_fail(line, "unexpected quote inside string");
            } else {
                out += ch;
            }
        }
        return TomlValue{out};
    }
    if (s.front() == '[') {
        if (s.back() != ']') toml_fail(line, "unterminated array");
        std::vector<TomlValue> items;
        std::string body = s.substr(1, s.size() - 2);
        std::size_t i = 0;
        while (i < body.size()) {
            // split on top-level commas; strings may contain commas
            std::size_t start = i;
            bool in_str = false;
            while (i < body.size() && (in_str || body[i] != ',')) {
                if (body[i] == '"' && (i == 0 || body[i - 1] != '\\')) in_str = !in_str;
                ++i;
            }
            std::string item = trim_copy(body.substr(start, i - start));
            if (!item.empty()) items.push_back(parse_toml_value(item, line));
            if (i < body.size()) ++i;  // skip comma
        }
        return TomlValue{items};
    }
    if (s == "true") return TomlValue{true};
    if (s == "false") return TomlValue{false};
    // number: integer if it parses fully without . e E
    bool looks_float = s.find_first_of(".eE") != std::string::npos;
    if (!looks_float) {
        std::int64_t iv = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), iv);
        if (res.ec == std::errc{} && res.ptr == s.data() + s.size()) return TomlValue{iv};
    }
    double dv = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), dv);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size()) return TomlValue{dv};
    toml_fail(line, "cannot parse value '" + s + "'");
    return TomlValue{};  // unreachable
}

// Strips a trailing comment that is not inside a string literal.
inline std::string strip_toml_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

}  // namespace detail

inline TomlFile parse_toml(const std::string& text) {
    TomlFile out;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        line = trim_copy(detail::strip_toml_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::toml_fail(line_no, "unterminated section header");
            section = trim_copy(line.substr(1, line.size() - 2));
            if (section.empty()) detail::toml_fail(line_no, "empty section name");
            continue;
        }
        // key = value, key either bare or quoted
        std::string key;
        std::size_t i = 0;
        if (line[0] == '"') {
            std::size_t end = line.find('"', 1);
            if (end == std::string::npos) detail::toml_fail(line_no, "unterminated quoted key");
            key = line.substr(1, end - 1);
            i = end + 1;
        } else {
            while (i < line.size() && line[i] != '=' && line[i] != ' ' && line[i] != '\t') ++i;
            key = line.substr(0, i);
        }
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size() || line[i] != '=')
            detail::toml_fail(line_no, "expected '=' after key");
        std::string value = trim_copy(line.substr(i + 1));
        std::string full_key = section.empty() ? key : section + "." + key;
        out.values[full_key] = detail::parse_toml_value(value, line_no);
    }
    return out;
}

inline TomlFile load_toml(const std::string& path) { return parse_toml(read_file(path)); }

}  // namespace raresynth
