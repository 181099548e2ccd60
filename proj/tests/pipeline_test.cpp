#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "raresynth/fixture.hpp"
#include "raresynth/flight.hpp"
#include "raresynth/table.hpp"

using namespace raresynth;

namespace {

std::size_t count_diverted(const Table& t) {
    std::size_t c = t.col(col::kDiversion);
    std::size_t n = 0;
    for (const auto& row : t.rows) n += std::get<bool>(row[c]) ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("schema shape matches the documented layout") {
    auto schema = flight_schema();
    CHECK(schema.size() == 31);
    std::size_t generated = 0;
    std::size_t relational = 0;
    std::size_t target = 0;
    for (const auto& c : schema) {
        if (c.role == ColumnRole::generated) ++generated;
        if (c.role == ColumnRole::relational) ++relational;
        if (c.role == ColumnRole::target) ++target;
    }
    CHECK(generated == 13);
    CHECK(relational == 17);
    CHECK(target == 1);
    CHECK(generated_column_names().size() == 14);
    CHECK(raw_flight_schema().size() == 33);
    CHECK(prediction_feature_names().size() == 14);
    // prediction features exclude anything revealing the arrival
    for (const auto& name : prediction_feature_names()) {
        CHECK(name != col::kWheelsOn);
        CHECK(name != col::kActualArr);
        CHECK(name != col::kActualElapsed);
        CHECK(name != col::kAirTime);
        CHECK(name != col::kArrDelta);
        CHECK(name != col::kDiversion);
    }
}

TEST_CASE("fixture corpus has exact planted positive counts") {
    Table t = generate_fixture_corpus(7, 5000, 0.02);
    CHECK(t.n_rows() == 5000);
    CHECK(t.n_cols() == 33);
    CHECK(count_diverted(t) == 100);
    CHECK(count_diverted(generate_fixture_corpus(7, 200, 0.5)) == 100);
    CHECK(count_diverted(generate_fixture_corpus(3, 6350, 0.02)) == 127);
    CHECK(count_diverted(generate_fixture_corpus(11, 500, 0.0)) == 0);
}

TEST_CASE("fixture generation is deterministic in the seed") {
    Table a = generate_fixture_corpus(42, 300, 0.05);
    Table b = generate_fixture_corpus(42, 300, 0.05);
    Table c = generate_fixture_corpus(43, 300, 0.05);
    CHECK(table_equal(a, b));
    CHECK_FALSE(table_equal(a, c));
}

TEST_CASE("fixture rows satisfy the additive time identities") {
    Table t = generate_fixture_corpus(5, 800, 0.03);
    const auto c_div = t.col(col::kDiversion);
    const auto c_sched_dep = t.col(col::kSchedDep);
    const auto c_act_dep = t.col(col::kActualDep);
    const auto c_dep_delta = t.col(col::kDepDelta);
    const auto c_taxi_out = t.col(col::kTaxiOut);
    const auto c_taxi_in = t.col(col::kTaxiIn);
    const auto c_wheels_off = t.col(col::kWheelsOff);
    const auto c_wheels_on = t.col(col::kWheelsOn);
    const auto c_air = t.col(col::kAirTime);
    const auto c_elapsed = t.col(col::kActualElapsed);
    const auto c_act_arr = t.col(col::kActualArr);
    const auto c_sched_arr = t.col(col::kSchedArr);
    const auto c_sched_elapsed = t.col(col::kSchedElapsed);
    const auto c_arr_delta = t.col(col::kArrDelta);
    const auto c_div_elapsed = t.col(col::kDivElapsed);
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        bool div = t.bool_at(r, c_div);
        auto sched_dep = t.minutes_at(r, c_sched_dep);
        auto act_dep = t.minutes_at(r, c_act_dep);
        CHECK(static_cast<double>(act_dep - sched_dep) == t.numeric_at(r, c_dep_delta));
        CHECK(t.minutes_at(r, c_wheels_off) ==
              act_dep + static_cast<std::int64_t>(t.numeric_at(r, c_taxi_out)));
        CHECK(t.minutes_at(r, c_sched_arr) ==
              sched_dep + static_cast<std::int64_t>(t.numeric_at(r, c_sched_elapsed)));
        double elapsed;
        if (div) {
            CHECK(std::isnan(t.numeric_at(r, c_elapsed)));
            CHECK(std::isnan(t.numeric_at(r, c_air)));
            elapsed = t.numeric_at(r, c_div_elapsed);
            CHECK(elapsed > 0.0);
        } else {
            elapsed = t.numeric_at(r, c_elapsed);
            CHECK(t.numeric_at(r, c_air) ==
                  elapsed - t.numeric_at(r, c_taxi_in) - t.numeric_at(r, c_taxi_out));
            CHECK(std::isnan(t.numeric_at(r, c_div_elapsed)));
        }
        auto act_arr = t.minutes_at(r, c_act_arr);
        CHECK(act_arr == act_dep + static_cast<std::int64_t>(elapsed));
        CHECK(t.minutes_at(r, c_wheels_on) ==
              act_arr - static_cast<std::int64_t>(t.numeric_at(r, c_taxi_in)));
        CHECK(t.numeric_at(r, c_arr_delta) ==
              static_cast<double>(act_arr - t.minutes_at(r, c_sched_arr)));
    }
}

TEST_CASE("preprocess imputes diverted rows and indexes relations") {
    Table raw = generate_fixture_corpus(7, 2000, 0.02);
    FlightCorpus corpus = preprocess(raw);
    CHECK(corpus.full.n_rows() == 2000);
    CHECK(corpus.full.n_cols() == 31);
    CHECK(corpus.diversions.n_rows() == 40);
    CHECK(corpus.diversions.n_cols() == 14);
    CHECK(corpus.dropped_negative_air_time == 0);
    CHECK(corpus.dropped_missing_imputation == 0);
    CHECK(corpus.airports.size() == 12);
    CHECK(corpus.route_distance.size() == 20);
    CHECK(corpus.route_set().size() == 20);

    // imputed values: elapsed from the diversion column, air time by subtraction
    const auto rc_div = raw.col(col::kDiversion);
    const auto rc_div_elapsed = raw.col(col::kDivElapsed);
    const auto fc_elapsed = corpus.full.col(col::kActualElapsed);
    const auto fc_air = corpus.full.col(col::kAirTime);
    const auto fc_ti = corpus.full.col(col::kTaxiIn);
    const auto fc_to = corpus.full.col(col::kTaxiOut);
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        if (!raw.bool_at(r, rc_div)) continue;
        double expect = raw.numeric_at(r, rc_div_elapsed);
        CHECK(corpus.full.numeric_at(r, fc_elapsed) == expect);
        CHECK(corpus.full.numeric_at(r, fc_air) ==
              expect - corpus.full.numeric_at(r, fc_ti) - corpus.full.numeric_at(r, fc_to));
    }
    // diversion-specific columns are gone
    CHECK_FALSE(corpus.full.find_column(col::kDivElapsed).has_value());
    CHECK_FALSE(corpus.full.find_column(col::kDivDistance).has_value());
    // every diversions-table row is labeled positive
    const auto dc = corpus.diversions.col(col::kDiversion);
    for (const auto& row : corpus.diversions.rows) CHECK(std::get<bool>(row[dc]));
}

TEST_CASE("preprocess drops defective rows with counts") {
    Table raw = generate_fixture_corpus(9, 50, 0.1);
    // break one diverted row (missing imputation source) and one clean row
    // (non-positive air time via huge taxi)
    const auto c_div = raw.col(col::kDiversion);
    const auto c_div_elapsed = raw.col(col::kDivElapsed);
    const auto c_taxi_out = raw.col(col::kTaxiOut);
    std::size_t div_row = 0;
    std::size_t clean_row = 0;
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        if (raw.bool_at(r, c_div)) div_row = r;
        else clean_row = r;
    }
    raw.rows[div_row][c_div_elapsed] = Cell{std::nan("")};
    raw.rows[clean_row][c_div] = Cell{true};
    raw.rows[clean_row][c_div_elapsed] = Cell{1.0};  // elapsed <= taxi sum
    raw.rows[clean_row][c_taxi_out] = Cell{40.0};
    FlightCorpus corpus = preprocess(raw);
    CHECK(corpus.dropped_missing_imputation == 1);
    CHECK(corpus.dropped_negative_air_time == 1);
    CHECK(corpus.full.n_rows() == 48);
    CHECK_THROWS_AS(preprocess(Table{raw.schema, {}}), Error);
}

TEST_CASE("relational reconstruction reproduces real rows exactly") {
    Table raw = generate_fixture_corpus(21, 1500, 0.04);
    FlightCorpus corpus = preprocess(raw);
    Table gen = generated_view(corpus.full);
    ReconstructResult rec = reconstruct_relational(gen, corpus);
    CHECK(rec.unknown_rows == 0);
    CHECK(rec.table.n_cols() == 31);
    CHECK(table_equal(rec.table, corpus.full));
}

TEST_CASE("reconstruction flags unknown airports and rejection removes them") {
    Table raw = generate_fixture_corpus(3, 400, 0.05);
    FlightCorpus corpus = preprocess(raw);
    Table gen = generated_view(corpus.diversions);
    // corrupt two rows: unknown origin airport, and a known-airport pair that
    // was never flown
    gen.rows[0][gen.col(col::kOriginId)] = Cell{std::string("99999")};
    gen.rows[1][gen.col(col::kOriginId)] = Cell{std::string("10397")};   // ATL
    gen.rows[1][gen.col(col::kDestId)] = Cell{std::string("14107")};     // PHX: not a route
    ReconstructResult rec = reconstruct_relational(gen, corpus);
    CHECK(rec.unknown_rows == 2);
    CHECK(rec.known_route[0] == 0);
    CHECK(rec.known_route[1] == 0);
    CHECK(rec.known_route[2] == 1);
    CHECK(rec.table.text_at(0, rec.table.col(col::kOriginIcao)).empty());
    CHECK(std::isnan(rec.table.numeric_at(0, rec.table.col(col::kDistance))));

    RejectResult rr = reject_invalid_routes(rec.table, corpus.route_set());
    CHECK(rr.rejected == 2);
    CHECK(rr.table.n_rows() == rec.table.n_rows() - 2);
    // rejection works on the 14-column view too
    RejectResult rr14 = reject_invalid_routes(gen, corpus.route_set());
    CHECK(rr14.rejected == 2);
}

TEST_CASE("reconstruction recomputes relational fields from generated ones") {
    Table raw = generate_fixture_corpus(13, 600, 0.03);
    FlightCorpus corpus = preprocess(raw);
    Table gen = generated_view(corpus.diversions);
    ReconstructResult rec = reconstruct_relational(gen, corpus);
    const Table& t = rec.table;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        auto sched_dep = t.minutes_at(r, t.col(col::kSchedDep));
        auto act_dep = t.minutes_at(r, t.col(col::kActualDep));
        CHECK(t.text_at(r, t.col(col::kQuarter)) == std::to_string(quarter_of(sched_dep)));
        CHECK(t.text_at(r, t.col(col::kDayOfWeek)) == std::to_string(day_of_week(sched_dep)));
        CHECK(t.minutes_at(r, t.col(col::kWheelsOff)) ==
              act_dep + static_cast<std::int64_t>(t.numeric_at(r, t.col(col::kTaxiOut))));
        CHECK(t.bool_at(r, t.col(col::kDepDelayLabel)) ==
              (t.numeric_at(r, t.col(col::kDepDelta)) > kDelayThresholdMinutes));
        CHECK(t.bool_at(r, t.col(col::kArrDelayLabel)) ==
              (t.numeric_at(r, t.col(col::kArrDelta)) > kDelayThresholdMinutes));
        RouteKey key{t.text_at(r, t.col(col::kOriginId)), t.text_at(r, t.col(col::kDestId))};
        CHECK(t.numeric_at(r, t.col(col::kDistance)) == corpus.route_distance.at(key));
    }
}

TEST_CASE("stratified split keeps both classes on both sides") {
    Table raw = generate_fixture_corpus(3, 6350, 0.02);
    FlightCorpus corpus = preprocess(raw);
    REQUIRE(count_diverted(corpus.full) == 127);
    SplitResult sp = split_stratified(corpus.full, col::kDiversion, 0.3, 17);
    CHECK(sp.train.n_rows() + sp.test.n_rows() == corpus.full.n_rows());
    std::size_t test_pos = count_diverted(sp.test);
    std::size_t train_pos = count_diverted(sp.train);
    CHECK(test_pos == 38);  // round(0.3 * 127)
    CHECK(train_pos == 89);
    CHECK(test_pos + train_pos == 127);
    CHECK(sp.test.n_rows() == static_cast<std::size_t>(std::llround(0.3 * 6223)) + 38);
    // determinism and seed sensitivity
    SplitResult sp2 = split_stratified(corpus.full, col::kDiversion, 0.3, 17);
    CHECK(sp.test_indices == sp2.test_indices);
    SplitResult sp3 = split_stratified(corpus.full, col::kDiversion, 0.3, 18);
    CHECK(sp.test_indices != sp3.test_indices);
    CHECK_THROWS_AS(split_stratified(corpus.full, col::kDiversion, 0.0, 1), Error);
}

TEST_CASE("fixture csv round trip is exact") {
    Table t = generate_fixture_corpus(31, 250, 0.04);
    std::string text = to_csv_string(t);
    LoadResult lr = load_csv_text(text, raw_flight_schema());
    CHECK(lr.skipped_rows == 0);
    CHECK(table_equal(lr.table, t));
}
