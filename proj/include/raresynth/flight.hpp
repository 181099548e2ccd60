#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "raresynth/rng.hpp"
#include "raresynth/stats.hpp"
#include "raresynth/table.hpp"

namespace raresynth {

// Canonical column names of the flight-record schema.
namespace col {
inline const std::string kCarrier = "Unique Carrier Code";
inline const std::string kTail = "Tail Number";
inline const std::string kOriginId = "Origin Airport ID";
inline const std::string kOriginIcao = "ICAO Origin Airport";
inline const std::string kOriginCity = "Origin City";
inline const std::string kOriginStateCode = "Origin State Code";
inline const std::string kOriginStateName = "Origin State Name";
inline const std::string kDestId = "Destination Airport ID";
inline const std::string kDestIcao = "ICAO Destination Airport";
inline const std::string kDestCity = "Destination City";
inline const std::string kDestStateCode = "Destination State Code";
inline const std::string kDestStateName = "Destination State Name";
inline const std::string kQuarter = "Quarter";
inline const std::string kDayOfWeek = "Day of Week";
inline const std::string kSchedDep = "Scheduled Departure Time UTC";
inline const std::string kActualDep = "Actual Departure Time UTC";
inline const std::string kDepDelta = "Departure DeltaT (min)";
inline const std::string kDepDelayLabel = "Departure Delay Label";
inline const std::string kTaxiOut = "Taxi Out Time (min)";
inline const std::string kWheelsOff = "Wheels Off Time UTC";
inline const std::string kWheelsOn = "Wheels On Time UTC";
inline const std::string kTaxiIn = "Taxi In Time (min)";
inline const std::string kSchedArr = "Scheduled Arrival Time UTC";
inline const std::string kActualArr = "Actual Arrival Time UTC";
inline const std::string kArrDelta = "Arrival DeltaT (min)";
inline const std::string kArrDelayLabel = "Arrival Delay Label";
inline const std::string kSchedElapsed = "Scheduled Elapsed Time (min)";
inline const std::string kActualElapsed = "Actual Elapsed Time (min)";
inline const std::string kAirTime = "Air Time (min)";
inline const std::string kDistance = "Distance (miles)";
inline const std::string kDiversion = "Diversion Label";
// Raw-only attributes, removed during preprocessing.
inline const std::string kDivElapsed = "Diversion Actual Elapsed Time (min)";
inline const std::string kDivDistance = "Diversion Distance (miles)";
}  // namespace col

// A departure or arrival more than this many minutes behind schedule counts
// as delayed.
inline constexpr double kDelayThresholdMinutes = 15.0;

// The 31-column processed schema. Columns whose role is `generated` or
// `target` form the 14-column view the generative models are trained on;
// `relational` columns are rebuilt from the generated ones afterwards.
inline std::vector<ColumnSchema> flight_schema() {
    using K = ColumnKind;
    using R = ColumnRole;
    return {
        {col::kCarrier, K::categorical, R::generated, ""},
        {col::kTail, K::categorical, R::generated, ""},
        {col::kOriginId, K::categorical, R::generated, ""},
        {col::kOriginIcao, K::categorical, R::relational, ""},
        {col::kOriginCity, K::categorical, R::relational, ""},
        {col::kOriginStateCode, K::categorical, R::relational, ""},
        {col::kOriginStateName, K::categorical, R::relational, ""},
        {col::kDestId, K::categorical, R::generated, ""},
        {col::kDestIcao, K::categorical, R::relational, ""},
        {col::kDestCity, K::categorical, R::relational, ""},
        {col::kDestStateCode, K::categorical, R::relational, ""},
        {col::kDestStateName, K::categorical, R::relational, ""},
        {col::kQuarter, K::categorical, R::relational, ""},
        {col::kDayOfWeek, K::categorical, R::relational, ""},
        {col::kSchedDep, K::datetime, R::generated, ""},
        {col::kActualDep, K::datetime, R::generated, ""},
        {col::kDepDelta, K::numeric, R::generated, "min"},
        {col::kDepDelayLabel, K::boolean, R::relational, ""},
        {col::kTaxiOut, K::numeric, R::generated, "min"},
        {col::kWheelsOff, K::datetime, R::relational, ""},
        {col::kWheelsOn, K::datetime, R::relational, ""},
        {col::kTaxiIn, K::numeric, R::generated, "min"},
        {col::kSchedArr, K::datetime, R::relational, ""},
        {col::kActualArr, K::datetime, R::relational, ""},
        {col::kArrDelta, K::numeric, R::generated, "min"},
        {col::kArrDelayLabel, K::boolean, R::relational, ""},
        {col::kSchedElapsed, K::numeric, R::generated, "min"},
        {col::kActualElapsed, K::numeric, R::generated, "min"},
        {col::kAirTime, K::numeric, R::generated, "min"},
        {col::kDistance, K::numeric, R::relational, "miles"},
        {col::kDiversion, K::boolean, R::target, ""},
    };
}

// Schema of raw input records: the processed columns plus the
// diversion-specific attributes that preprocessing removes.
inline std::vector<ColumnSchema> raw_flight_schema() {
    auto schema = flight_schema();
    schema.push_back({col::kDivElapsed, ColumnKind::numeric, ColumnRole::dropped, "min"});
    schema.push_back({col::kDivDistance, ColumnKind::numeric, ColumnRole::dropped, "miles"});
    return schema;
}

inline std::vector<std::string> generated_column_names() {
    std::vector<std::string> names;
    for (const auto& c : flight_schema())
        if (c.role == ColumnRole::generated || c.role == ColumnRole::target) names.push_back(c.name);
    return names;
}

// Take-off-time features for the diversion classifier; deliberately excludes
// anything that would reveal the arrival (Wheels On, actual/air time, ...).
inline std::vector<std::string> prediction_feature_names() {
    return {col::kCarrier,   col::kTail,     col::kOriginIcao,   col::kDestIcao,
            col::kQuarter,   col::kDayOfWeek, col::kSchedDep,     col::kActualDep,
            col::kDepDelta,  col::kTaxiOut,  col::kWheelsOff,    col::kSchedArr,
            col::kSchedElapsed, col::kDistance};
}

inline Table generated_view(const Table& t) { return select_columns(t, generated_column_names()); }

struct AirportInfo {
    std::string icao;
    std::string city;
    std::string state_code;
    std::string state_name;
};

using RouteKey = std::pair<std::string, std::string>;  // origin ID, destination ID

struct FlightCorpus {
    Table full;        // 31 columns, all rows surviving preprocessing
    Table diversions;  // 14-column generated view of the diverted rows
    std::map<std::string, AirportInfo> airports;
    std::map<RouteKey, double> route_distance;  // median observed distance per route
    std::size_t dropped_negative_air_time = 0;
    std::size_t dropped_missing_imputation = 0;

    std::set<RouteKey> route_set() const {
        std::set<RouteKey> s;
        for (const auto& [k, _] : route_distance) s.insert(k);
        return s;
    }
};

// Normalizes raw flight records into the processed corpus:
//  - diverted rows get Actual Elapsed imputed from the diversion-specific
//    elapsed time, and Air Time rebuilt as elapsed - taxi in - taxi out;
//  - rows lacking the imputation source, or whose rebuilt air time is not
//    positive, are dropped and counted;
//  - both DeltaT columns and delay labels are re-derived from the timestamps
//    so downstream identities hold exactly;
//  - the diversion-specific columns are removed;
//  - airport attributes and per-route median distances are indexed for
//    relational reconstruction.
inline FlightCorpus preprocess(const Table& raw) {
    if (raw.n_rows() == 0) throw Error(Errc::empty_table, "no rows to preprocess");
    const std::size_t c_div = raw.col(col::kDiversion);
    const std::size_t c_div_elapsed = raw.col(col::kDivElapsed);
    const std::size_t c_actual_elapsed = raw.col(col::kActualElapsed);
    const std::size_t c_air = raw.col(col::kAirTime);
    const std::size_t c_taxi_in = raw.col(col::kTaxiIn);
    const std::size_t c_taxi_out = raw.col(col::kTaxiOut);
    const std::size_t c_sched_dep = raw.col(col::kSchedDep);
    const std::size_t c_act_dep = raw.col(col::kActualDep);
    const std::size_t c_sched_arr = raw.col(col::kSchedArr);
    const std::size_t c_act_arr = raw.col(col::kActualArr);
    const std::size_t c_wheels_on = raw.col(col::kWheelsOn);
    const std::size_t c_dep_delta = raw.col(col::kDepDelta);
    const std::size_t c_arr_delta = raw.col(col::kArrDelta);
    const std::size_t c_dep_label = raw.col(col::kDepDelayLabel);
    const std::size_t c_arr_label = raw.col(col::kArrDelayLabel);

    FlightCorpus corpus;
    corpus.full.schema = flight_schema();
    std::vector<std::size_t> out_src;  // raw column index per output column
    for (const auto& c : corpus.full.schema) out_src.push_back(raw.col(c.name));

    const std::size_t c_origin = raw.col(col::kOriginId);
    const std::size_t c_dest = raw.col(col::kDestId);
    const std::size_t c_origin_icao = raw.col(col::kOriginIcao);
    const std::size_t c_dest_icao = raw.col(col::kDestIcao);
    const std::size_t c_dist = raw.col(col::kDistance);
    std::map<RouteKey, std::vector<double>> distances;

    for (const auto& row : raw.rows) {
        bool diverted = std::get<bool>(row[c_div]);
        double actual_elapsed = std::get<double>(row[c_actual_elapsed]);
        double air_time = std::get<double>(row[c_air]);
        double taxi_in = std::get<double>(row[c_taxi_in]);
        double taxi_out = std::get<double>(row[c_taxi_out]);
        std::int64_t act_arr = std::get<std::int64_t>(row[c_act_arr]);
        std::int64_t wheels_on = std::get<std::int64_t>(row[c_wheels_on]);

        if (diverted) {
            double div_elapsed = std::get<double>(row[c_div_elapsed]);
            if (std::isnan(div_elapsed)) {
                ++corpus.dropped_missing_imputation;
                continue;
            }
            actual_elapsed = div_elapsed;
            air_time = actual_elapsed - taxi_in - taxi_out;
        } else if (std::isnan(actual_elapsed) || std::isnan(air_time)) {
            ++corpus.dropped_missing_imputation;
            continue;
        }
        if (!(air_time > 0.0)) {
            ++corpus.dropped_negative_air_time;
            continue;
        }

        std::int64_t sched_dep = std::get<std::int64_t>(row[c_sched_dep]);
        std::int64_t act_dep = std::get<std::int64_t>(row[c_act_dep]);
        std::int64_t sched_arr = std::get<std::int64_t>(row[c_sched_arr]);
        double dep_delta = static_cast<double>(act_dep - sched_dep);
        double arr_delta = static_cast<double>(act_arr - sched_arr);

        std::vector<Cell> out_row;
        out_row.reserve(corpus.full.schema.size());
        for (std::size_t c = 0; c < corpus.full.schema.size(); ++c) {
            const std::string& name = corpus.full.schema[c].name;
            if (name == col::kActualElapsed)
                out_row.emplace_back(actual_elapsed);
            else if (name == col::kAirTime)
                out_row.emplace_back(air_time);
            else if (name == col::kDepDelta)
                out_row.emplace_back(dep_delta);
            else if (name == col::kArrDelta)
                out_row.emplace_back(arr_delta);
            else if (name == col::kDepDelayLabel)
                out_row.emplace_back(dep_delta > kDelayThresholdMinutes);
            else if (name == col::kArrDelayLabel)
                out_row.emplace_back(arr_delta > kDelayThresholdMinutes);
            else
                out_row.push_back(row[out_src[c]]);
        }
        corpus.full.rows.push_back(std::move(out_row));

        // Relational indexes come from the kept rows only.
        auto note_airport = [&](std::size_t id_col, std::size_t icao_off) {
            const std::string& id = std::get<std::string>(row[id_col]);
            if (corpus.airports.count(id)) return;
            AirportInfo info;
            info.icao = std::get<std::string>(row[icao_off]);
            info.city = std::get<std::string>(row[icao_off + 1]);
            info.state_code = std::get<std::string>(row[icao_off + 2]);
            info.state_name = std::get<std::string>(row[icao_off + 3]);
            corpus.airports.emplace(id, std::move(info));
        };
        note_airport(c_origin, c_origin_icao);
        note_airport(c_dest, c_dest_icao);
        double dist = std::get<double>(row[c_dist]);
        if (!std::isnan(dist))
            distances[{std::get<std::string>(row[c_origin]), std::get<std::string>(row[c_dest])}]
                .push_back(dist);
    }

    if (corpus.full.n_rows() == 0)
        throw Error(Errc::empty_table, "all rows dropped during preprocessing");
    for (auto& [route, ds] : distances) corpus.route_distance[route] = median(std::move(ds));

    std::vector<char> diverted_mask;
    const std::size_t full_div = corpus.full.col(col::kDiversion);
    for (const auto& row : corpus.full.rows)
        diverted_mask.push_back(std::get<bool>(row[full_div]) ? 1 : 0);
    corpus.diversions = generated_view(filter_rows(corpus.full, diverted_mask));
    return corpus;
}

struct ReconstructResult {
    Table table;  // 31 columns
    std::vector<char> known_route;  // per row: both airports known and route indexed
    std::size_t unknown_rows = 0;
};

// Rebuilds the relational columns from a 14-column generated table:
// airport attributes by lookup, calendar fields from the scheduled
// departure, wheel/arrival timestamps from the additive time identities,
// delay labels from the thresholds, distance from the per-route median.
// Rows referencing unknown airports or routes keep empty/NaN relational
// cells and are flagged; reject_invalid_routes() removes them.
inline ReconstructResult reconstruct_relational(const Table& gen, const FlightCorpus& corpus) {
    ReconstructResult out;
    out.table.schema = flight_schema();
    const std::size_t g_carrier = gen.col(col::kCarrier);
    const std::size_t g_tail = gen.col(col::kTail);
    const std::size_t g_origin = gen.col(col::kOriginId);
    const std::size_t g_dest = gen.col(col::kDestId);
    const std::size_t g_sched_dep = gen.col(col::kSchedDep);
    const std::size_t g_act_dep = gen.col(col::kActualDep);
    const std::size_t g_dep_delta = gen.col(col::kDepDelta);
    const std::size_t g_taxi_out = gen.col(col::kTaxiOut);
    const std::size_t g_taxi_in = gen.col(col::kTaxiIn);
    const std::size_t g_arr_delta = gen.col(col::kArrDelta);
    const std::size_t g_sched_elapsed = gen.col(col::kSchedElapsed);
    const std::size_t g_actual_elapsed = gen.col(col::kActualElapsed);
    const std::size_t g_air = gen.col(col::kAirTime);
    const std::size_t g_div = gen.col(col::kDiversion);

    static const AirportInfo kUnknownAirport{"", "", "", ""};
    out.table.rows.reserve(gen.n_rows());
    for (const auto& row : gen.rows) {
        const std::string& origin = std::get<std::string>(row[g_origin]);
        const std::string& dest = std::get<std::string>(row[g_dest]);
        auto o_it = corpus.airports.find(origin);
        auto d_it = corpus.airports.find(dest);
        auto r_it = corpus.route_distance.find({origin, dest});
        bool known = o_it != corpus.airports.end() && d_it != corpus.airports.end() &&
                     r_it != corpus.route_distance.end();
        const AirportInfo& o = o_it != corpus.airports.end() ? o_it->second : kUnknownAirport;
        const AirportInfo& d = d_it != corpus.airports.end() ? d_it->second : kUnknownAirport;
        double distance = r_it != corpus.route_distance.end() ? r_it->second : std::nan("");
        if (!known) ++out.unknown_rows;
        out.known_route.push_back(known ? 1 : 0);

        std::int64_t sched_dep = std::get<std::int64_t>(row[g_sched_dep]);
        std::int64_t act_dep = std::get<std::int64_t>(row[g_act_dep]);
        double taxi_out = std::get<double>(row[g_taxi_out]);
        double taxi_in = std::get<double>(row[g_taxi_in]);
        double sched_elapsed = std::get<double>(row[g_sched_elapsed]);
        double actual_elapsed = std::get<double>(row[g_actual_elapsed]);
        double air_time = std::get<double>(row[g_air]);
        double dep_delta = std::get<double>(row[g_dep_delta]);  // generated, passes through
        double arr_delta = std::get<double>(row[g_arr_delta]);

        auto shift = [](std::int64_t base, double minutes) {
            return base + static_cast<std::int64_t>(std::llround(minutes));
        };
        std::int64_t wheels_off = shift(act_dep, taxi_out);
        std::int64_t wheels_on = shift(wheels_off, air_time);
        std::int64_t sched_arr = shift(sched_dep, sched_elapsed);
        std::int64_t act_arr = shift(act_dep, actual_elapsed);

        std::vector<Cell> r;
        r.reserve(31);
        r.emplace_back(row[g_carrier]);                       // carrier
        r.emplace_back(row[g_tail]);                          // tail
        r.emplace_back(std::string(origin));                  // origin id
        r.emplace_back(o.icao);
        r.emplace_back(o.city);
        r.emplace_back(o.state_code);
        r.emplace_back(o.state_name);
        r.emplace_back(std::string(dest));                    // destination id
        r.emplace_back(d.icao);
        r.emplace_back(d.city);
        r.emplace_back(d.state_code);
        r.emplace_back(d.state_name);
        r.emplace_back(std::to_string(quarter_of(sched_dep)));
        r.emplace_back(std::to_string(day_of_week(sched_dep)));
        r.emplace_back(sched_dep);
        r.emplace_back(act_dep);
        r.emplace_back(dep_delta);
        r.emplace_back(dep_delta > kDelayThresholdMinutes);
        r.emplace_back(taxi_out);
        r.emplace_back(wheels_off);
        r.emplace_back(wheels_on);
        r.emplace_back(taxi_in);
        r.emplace_back(sched_arr);
        r.emplace_back(act_arr);
        r.emplace_back(arr_delta);
        r.emplace_back(arr_delta > kDelayThresholdMinutes);
        r.emplace_back(sched_elapsed);
        r.emplace_back(actual_elapsed);
        r.emplace_back(air_time);
        r.emplace_back(distance);
        r.emplace_back(row[g_div]);
        out.table.rows.push_back(std::move(r));
    }
    return out;
}

struct RejectResult {
    Table table;
    std::size_t rejected = 0;
};

// Drops rows whose origin-destination pair is not a historically observed
// route. Works on any table carrying the two airport-ID columns.
inline RejectResult reject_invalid_routes(const Table& t, const std::set<RouteKey>& routes) {
    const std::size_t c_origin = t.col(col::kOriginId);
    const std::size_t c_dest = t.col(col::kDestId);
    std::vector<char> keep;
    keep.reserve(t.n_rows());
    for (const auto& row : t.rows) {
        RouteKey key{std::get<std::string>(row[c_origin]), std::get<std::string>(row[c_dest])};
        keep.push_back(routes.count(key) ? 1 : 0);
    }
    RejectResult out;
    out.table = filter_rows(t, keep);
    out.rejected = t.n_rows() - out.table.n_rows();
    return out;
}

struct SplitResult {
    Table train;
    Table test;
    std::vector<std::size_t> test_indices;  // row indices in the input table
};

// Stratified holdout split on a boolean target: within each class the rows
// are shuffled with a class-specific seed and round(n * test_fraction) of
// them go to the test side.
inline SplitResult split_stratified(const Table& t, const std::string& target,
                                    double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw Error(Errc::invalid_argument, "test_fraction must be in (0,1)");
    if (t.n_rows() == 0) throw Error(Errc::empty_table, "cannot split an empty table");
    const std::size_t c = t.col(target);
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < t.n_rows(); ++r)
        (std::get<bool>(t.rows[r][c]) ? pos : neg).push_back(r);
    std::vector<char> in_test(t.n_rows(), 0);
    int stream = 0;
    for (auto* cls : {&neg, &pos}) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(stream++)));
        rng.shuffle(*cls);
        auto k = static_cast<std::size_t>(
            std::llround(test_fraction * static_cast<double>(cls->size())));
        for (std::size_t i = 0; i < k && i < cls->size(); ++i) in_test[(*cls)[i]] = 1;
    }
    SplitResult out;
    out.train.schema = t.schema;
    out.test.schema = t.schema;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
        if (in_test[r]) {
            out.test.rows.push_back(t.rows[r]);
            out.test_indices.push_back(r);
        } else {
            out.train.rows.push_back(t.rows[r]);
        }
    }
    return out;
}

}  // namespace raresynth
