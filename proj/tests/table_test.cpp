#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "raresynth/table.hpp"

using namespace raresynth;

namespace {

std::vector<ColumnSchema> demo_schema() {
    return {
        {"name", ColumnKind::categorical, ColumnRole::generated, ""},
        {"score", ColumnKind::numeric, ColumnRole::generated, ""},
        {"when", ColumnKind::datetime, ColumnRole::generated, ""},
        {"flag", ColumnKind::boolean, ColumnRole::target, ""},
    };
}

Table demo_table() {
    Table t;
    t.schema = demo_schema();
    t.rows.push_back({Cell{std::string("alpha")}, Cell{1.5}, Cell{std::int64_t{28143360}},
                      Cell{true}});
    t.rows.push_back({Cell{std::string("beta, with comma")}, Cell{std::nan("")},
                      Cell{kMissingMinutes}, Cell{false}});
    t.rows.push_back({Cell{std::string("quote \" and\nnewline")}, Cell{-0.125},
                      Cell{std::int64_t{0}}, Cell{true}});
    return t;
}

}  // namespace

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(std::nan("")).empty());
    double v = 1.0 / 3.0;
    auto cell = parse_cell(format_double(v), ColumnKind::numeric);
    CHECK(std::get<double>(*cell) == v);  // bit-exact round trip
}

TEST_CASE("cell parsing by kind") {
    CHECK(std::get<double>(*parse_cell(" 42 ", ColumnKind::numeric)) == 42.0);
    CHECK(std::isnan(std::get<double>(*parse_cell("", ColumnKind::numeric))));
    CHECK_FALSE(parse_cell("4x2", ColumnKind::numeric).has_value());
    CHECK(std::get<std::string>(*parse_cell(" raw ", ColumnKind::categorical)) == " raw ");
    CHECK(std::get<std::int64_t>(*parse_cell("1970-01-01T00:01:00Z", ColumnKind::datetime)) == 1);
    CHECK(std::get<std::int64_t>(*parse_cell("", ColumnKind::datetime)) == kMissingMinutes);
    CHECK_FALSE(parse_cell("garbage", ColumnKind::datetime).has_value());
    CHECK(std::get<bool>(*parse_cell("true", ColumnKind::boolean)));
    CHECK(std::get<bool>(*parse_cell("1", ColumnKind::boolean)));
    CHECK_FALSE(std::get<bool>(*parse_cell("False", ColumnKind::boolean)));
    CHECK_FALSE(parse_cell("maybe", ColumnKind::boolean).has_value());
}

TEST_CASE("csv grid handles rfc4180 structure") {
    auto grid = parse_csv_grid("a,b\n1,\"x,y\"\n\"multi\nline\",\"q\"\"q\"\n");
    REQUIRE(grid.size() == 3);
    CHECK(grid[0] == std::vector<std::string>{"a", "b"});
    CHECK(grid[1] == std::vector<std::string>{"1", "x,y"});
    CHECK(grid[2] == std::vector<std::string>{"multi\nline", "q\"q"});
    // CRLF and missing trailing newline
    auto crlf = parse_csv_grid("a,b\r\n1,2");
    REQUIRE(crlf.size() == 2);
    CHECK(crlf[1] == std::vector<std::string>{"1", "2"});
    CHECK_THROWS_AS(parse_csv_grid("a,\"unterminated\n"), Error);
    CHECK_THROWS_AS(parse_csv_grid("a,\"x\"junk\n"), Error);
}

TEST_CASE("csv write/load round trip is exact") {
    Table t = demo_table();
    std::string text = to_csv_string(t);
    LoadResult lr = load_csv_text(text, t.schema);
    CHECK(lr.skipped_rows == 0);
    CHECK(table_equal(lr.table, t));
}

TEST_CASE("load_csv maps headers and skips bad rows") {
    const std::string text =
        "NAME,POINTS,WHEN,FLAG\n"
        "a,1.5,1970-01-01T00:00:00Z,true\n"
        "b,oops,1970-01-01T00:00:00Z,true\n"
        "c,2.5,1970-01-01T00:00:00Z,maybe\n"
        "d,3.5,1970-01-02T00:00:00Z,false\n";
    std::unordered_map<std::string, std::string> mapping{
        {"NAME", "name"}, {"POINTS", "score"}, {"WHEN", "when"}, {"FLAG", "flag"}};
    LoadResult lr = load_csv_text(text, demo_schema(), mapping);
    CHECK(lr.table.n_rows() == 2);
    CHECK(lr.skipped_rows == 2);
    REQUIRE(lr.warnings.size() == 2);
    CHECK(lr.warnings[0].find("score") != std::string::npos);
    CHECK(lr.table.text_at(0, 0) == "a");
    CHECK(lr.table.text_at(1, 0) == "d");
}

TEST_CASE("load_csv error taxonomy") {
    CHECK_THROWS_AS(load_csv_text("", demo_schema()), Error);
    try {
        load_csv_text("", demo_schema());
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_file);
    }
    try {
        load_csv_text("name,score\n", demo_schema());
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_column);
    }
    // header only: zero-row table is valid
    LoadResult lr = load_csv_text("name,score,when,flag\n", demo_schema());
    CHECK(lr.table.n_rows() == 0);
    CHECK(lr.table.n_cols() == 4);
}

TEST_CASE("extra csv columns are ignored") {
    const std::string text = "junk,name,score,when,flag\nz,a,1,1970-01-01T00:00:00Z,true\n";
    LoadResult lr = load_csv_text(text, demo_schema());
    CHECK(lr.table.n_rows() == 1);
    CHECK(lr.table.text_at(0, 0) == "a");
}

TEST_CASE("table utilities") {
    Table t = demo_table();
    Table sel = select_columns(t, {"flag", "name"});
    CHECK(sel.n_cols() == 2);
    CHECK(sel.schema[0].name == "flag");
    CHECK(sel.text_at(0, 1) == "alpha");
    CHECK_THROWS_AS(select_columns(t, {"nope"}), Error);

    Table f = filter_rows(t, {1, 0, 1});
    CHECK(f.n_rows() == 2);
    CHECK(f.text_at(1, 0) == "quote \" and\nnewline");

    Table cc = concat_rows(t, f);
    CHECK(cc.n_rows() == 5);
    CHECK_THROWS_AS(concat_rows(t, sel), Error);

    auto nums = column_as_double(t, 1);
    CHECK(nums[0] == 1.5);
    CHECK(std::isnan(nums[1]));
    auto whens = column_as_double(t, 2);
    CHECK(whens[0] == 28143360.0);
    CHECK(std::isnan(whens[1]));
    auto flags = column_as_double(t, 3);
    CHECK(flags == std::vector<double>{1.0, 0.0, 1.0});
    CHECK_THROWS_AS(column_as_double(t, 0), Error);
}

TEST_CASE("cell and table equality treat NaN as equal to itself") {
    CHECK(cell_equal(Cell{std::nan("")}, Cell{std::nan("")}));
    CHECK_FALSE(cell_equal(Cell{1.0}, Cell{2.0}));
    CHECK_FALSE(cell_equal(Cell{1.0}, Cell{std::string("1")}));
    Table t = demo_table();
    Table u = t;
    CHECK(table_equal(t, u));
    u.rows[0][1] = Cell{9.0};
    CHECK_FALSE(table_equal(t, u));
}
