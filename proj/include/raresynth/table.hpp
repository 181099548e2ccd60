#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "raresynth/datetime.hpp"
#include "raresynth/errors.hpp"

namespace raresynth {

enum class ColumnKind { numeric, categorical, datetime, boolean };

enum class ColumnRole { generated, relational, target, dropped };

inline const char* kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::datetime: return "datetime";
        case ColumnKind::boolean: return "boolean";
    }
    return "unknown";
}

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    ColumnRole role = ColumnRole::generated;
    std::string unit;  // informational only ("min", "miles", ...)
};

// Cell storage by kind: numeric -> double (NaN = missing), categorical ->
// string, datetime -> minutes since epoch (kMissingMinutes = missing),
// boolean -> bool.
using Cell = std::variant<double, std::string, std::int64_t, bool>;

inline bool cell_equal(const Cell& a, const Cell& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<double>(a)) {
        double x = std::get<double>(a);
        double y = std::get<double>(b);
        if (std::isnan(x) && std::isnan(y)) return true;
        return x == y;
    }
    return a == b;
}

struct Table {
    std::vector<ColumnSchema> schema;
    std::vector<std::vector<Cell>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return schema.size(); }

    std::optional<std::size_t> find_column(const std::string& name) const {
        for (std::size_t i = 0; i < schema.size(); ++i)
            if (schema[i].name == name) return i;
        return std::nullopt;
    }

    std::size_t col(const std::string& name) const {
        auto i = find_column(name);
        if (!i) throw Error(Errc::missing_column, "column '" + name + "' not found");
        return *i;
    }

    double numeric_at(std::size_t r, std::size_t c) const { return std::get<double>(rows[r][c]); }
    const std::string& text_at(std::size_t r, std::size_t c) const {
        return std::get<std::string>(rows[r][c]);
    }
    std::int64_t minutes_at(std::size_t r, std::size_t c) const {
        return std::get<std::int64_t>(rows[r][c]);
    }
    bool bool_at(std::size_t r, std::size_t c) const { return std::get<bool>(rows[r][c]); }
};

inline bool table_equal(const Table& a, const Table& b) {
    if (a.n_cols() != b.n_cols() || a.n_rows() != b.n_rows()) return false;
    for (std::size_t c = 0; c < a.n_cols(); ++c)
        if (a.schema[c].name != b.schema[c].name || a.schema[c].kind != b.schema[c].kind)
            return false;
    for (std::size_t r = 0; r < a.n_rows(); ++r)
        for (std::size_t c = 0; c < a.n_cols(); ++c)
            if (!cell_equal(a.rows[r][c], b.rows[r][c])) return false;
    return true;
}

// --- column/row utilities -------------------------------------------------

inline Table select_columns(const Table& t, const std::vector<std::string>& names) {
    Table out;
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(t.col(n));
    for (std::size_t i : idx) out.schema.push_back(t.schema[i]);
    out.rows.reserve(t.n_rows());
    for (const auto& row : t.rows) {
        std::vector<Cell> r;
        r.reserve(idx.size());
        for (std::size_t i : idx) r.push_back(row[i]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

inline Table filter_rows(const Table& t, const std::vector<char>& keep) {
    if (keep.size() != t.n_rows()) throw Error(Errc::invalid_argument, "filter mask size mismatch");
    Table out;
    out.schema = t.schema;
    for (std::size_t r = 0; r < t.n_rows(); ++r)
        if (keep[r]) out.rows.push_back(t.rows[r]);
    return out;
}

inline Table concat_rows(const Table& a, const Table& b) {
    if (a.n_cols() != b.n_cols())
        throw Error(Errc::schema_mismatch, "concat: column count differs");
    for (std::size_t c = 0; c < a.n_cols(); ++c)
        if (a.schema[c].name != b.schema[c].name || a.schema[c].kind != b.schema[c].kind)
            throw Error(Errc::schema_mismatch, "concat: column '" + a.schema[c].name +
                                                   "' differs between tables");
    Table out = a;
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    return out;
}

// Numeric view of a column: numerics pass through (NaN for missing),
// datetimes become minutes, booleans become 0/1.
inline std::vector<double> column_as_double(const Table& t, std::size_t c) {
    std::vector<double> out;
    out.reserve(t.n_rows());
    for (const auto& row : t.rows) {
        const Cell& cell = row[c];
        switch (t.schema[c].kind) {
            case ColumnKind::numeric: out.push_back(std::get<double>(cell)); break;
            case ColumnKind::datetime: {
                std::int64_t m = std::get<std::int64_t>(cell);
                out.push_back(m == kMissingMinutes ? std::nan("") : static_cast<double>(m));
                break;
            }
            case ColumnKind::boolean: out.push_back(std::get<bool>(cell) ? 1.0 : 0.0); break;
            case ColumnKind::categorical:
                throw Error(Errc::invalid_argument,
                            "column '" + t.schema[c].name + "' is categorical");
        }
    }
    return out;
}

// --- cell formatting / parsing ---------------------------------------------

inline std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& cell, ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: return format_double(std::get<double>(cell));
        case ColumnKind::categorical: return std::get<std::string>(cell);
        case ColumnKind::datetime: return format_iso(std::get<std::int64_t>(cell));
        case ColumnKind::boolean: return std::get<bool>(cell) ? "true" : "false";
    }
    return "";
}

inline std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Kind-directed parse; nullopt means the text is not a valid value of that
// kind (callers decide whether that skips the row or raises).
inline std::optional<Cell> parse_cell(const std::string& raw, ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: {
            std::string s = trim_copy(raw);
            if (s.empty()) return Cell{std::nan("")};
            double v = 0.0;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
            return Cell{v};
        }
        case ColumnKind::categorical: return Cell{raw};
        case ColumnKind::datetime: {
            std::string s = trim_copy(raw);
            if (s.empty()) return Cell{kMissingMinutes};
            auto m = parse_iso(s);
            if (!m) return std::nullopt;
            return Cell{*m};
        }
        case ColumnKind::boolean: {
            std::string s = trim_copy(raw);
            if (s == "true" || s == "True" || s == "TRUE" || s == "1") return Cell{true};
            if (s == "false" || s == "False" || s == "FALSE" || s == "0") return Cell{false};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// --- CSV (RFC 4180) ---------------------------------------------------------

inline std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos ||
                        (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        if (c) os << ',';
        os << csv_escape(t.schema[c].name);
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < t.n_cols(); ++c) {
            if (c) os << ',';
            os << csv_escape(format_cell(row[c], t.schema[c].kind));
        }
        os << '\n';
    }
}

inline std::string to_csv_string(const Table& t) {
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

// Raw grid of fields. Throws parse_failure on structurally malformed input
// (unbalanced quotes, junk after a closing quote).
inline std::vector<std::vector<std::string>> parse_csv_grid(const std::string& text) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> row;
    std::string field;
    enum class State { start, plain, quoted, quote_end };
    State st = State::start;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        st = State::start;
    };
    auto end_row = [&] {
        end_field();
        grid.push_back(std::move(row));
        row.clear();
    };
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char ch = text[i];
        switch (st) {
            case State::start:
                if (ch == '"') {
                    st = State::quoted;
                } else if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_row();
                } else if (ch == '\r') {
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else {
                    field += ch;
                    st = State::plain;
                }
                break;
            case State::plain:
                if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_row();
                } else if (ch == '\r') {
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else {
                    field += ch;
                }
                break;
            case State::quoted:
                if (ch == '"') {
                    st = State::quote_end;
                } else {
                    field += ch;
                }
                break;
            case State::quote_end:
                if (ch == '"') {
                    field += '"';
                    st = State::quoted;
                } else if (ch == ',') {
                    end_field();
                } else if (ch == '\n') {
                    end_row();
                } else if (ch == '\r') {
                    if (i + 1 < n && text[i + 1] == '\n') ++i;
                    end_row();
                } else {
                    throw Error(Errc::parse_failure,
                                "unexpected character after closing quote at offset " +
                                    std::to_string(i));
                }
                break;
        }
        ++i;
    }
    if (st == State::quoted)
        throw Error(Errc::parse_failure, "unterminated quoted field at end of input");
    if (st != State::start || !row.empty()) end_row();
    // A lone trailing newline leaves no dangling state; drop blank last lines
    // produced by text that ends without one.
    return grid;
}

struct LoadResult {
    Table table;
    std::size_t skipped_rows = 0;
    std::vector<std::string> warnings;  // capped; first offenders only
};

// Loads a CSV against an expected schema. `mapping` translates local header
// names to schema names (empty = identity). Rows with unparseable cells are
// skipped and counted; structural problems and missing columns throw.
inline LoadResult load_csv_text(const std::string& text, const std::vector<ColumnSchema>& schema,
                                const std::unordered_map<std::string, std::string>& mapping = {}) {
    auto grid = parse_csv_grid(text);
    if (grid.empty()) throw Error(Errc::empty_file, "CSV has no header row");
    const auto& header = grid.front();
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name = trim_copy(header[i]);
        auto it = mapping.find(name);
        if (it != mapping.end()) name = it->second;
        by_name.emplace(name, i);
    }
    std::vector<std::size_t> source_col(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        auto it = by_name.find(schema[c].name);
        if (it == by_name.end())
            throw Error(Errc::missing_column, "required column '" + schema[c].name +
                                                  "' absent from CSV header");
        source_col[c] = it->second;
    }
    LoadResult out;
    out.table.schema = schema;
    constexpr std::size_t kMaxWarnings = 20;
    for (std::size_t r = 1; r < grid.size(); ++r) {
        const auto& fields = grid[r];
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        std::vector<Cell> row;
        row.reserve(schema.size());
        bool ok = true;
        for (std::size_t c = 0; c < schema.size() && ok; ++c) {
            if (source_col[c] >= fields.size()) {
                ok = false;
                if (out.warnings.size() < kMaxWarnings)
                    out.warnings.push_back("row " + std::to_string(r) + ": too few fields");
                break;
            }
            auto cell = parse_cell(fields[source_col[c]], schema[c].kind);
            if (!cell) {
                ok = false;
                if (out.warnings.size() < kMaxWarnings)
                    out.warnings.push_back("row " + std::to_string(r) + ", column '" +
                                           schema[c].name + "': cannot parse '" +
                                           fields[source_col[c]] + "' as " +
                                           kind_name(schema[c].kind));
                break;
            }
            row.push_back(std::move(*cell));
        }
        if (ok)
            out.table.rows.push_back(std::move(row));
        else
            ++out.skipped_rows;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_failure, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::io_failure, "short write to '" + path + "'");
}

inline LoadResult load_csv(const std::string& path, const std::vector<ColumnSchema>& schema,
                           const std::unordered_map<std::string, std::string>& mapping = {}) {
    return load_csv_text(read_file(path), schema, mapping);
}

}  // namespace raresynth
