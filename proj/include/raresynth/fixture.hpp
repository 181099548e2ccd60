#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "raresynth/flight.hpp"
#include "raresynth/rng.hpp"
#include "raresynth/table.hpp"

namespace raresynth {

namespace fixture_detail {

struct FixtureAirport {
    const char* id;
    const char* icao;
    const char* city;
    const char* state_code;
    const char* state_name;
};

inline const std::array<FixtureAirport, 12>& fixture_airports() {
    static const std::array<FixtureAirport, 12> kAirports{{
        {"10397", "KATL", "Atlanta", "GA", "Georgia"},
        {"13930", "KORD", "Chicago", "IL", "Illinois"},
        {"11292", "KDEN", "Denver", "CO", "Colorado"},
        {"12892", "KLAX", "Los Angeles", "CA", "California"},
        {"11298", "KDFW", "Dallas/Fort Worth", "TX", "Texas"},
        {"12266", "KIAH", "Houston", "TX", "Texas"},
        {"14107", "KPHX", "Phoenix", "AZ", "Arizona"},
        {"14771", "KSFO", "San Francisco", "CA", "California"},
        {"12478", "KJFK", "New York", "NY", "New York"},
        {"13487", "KMSP", "Minneapolis", "MN", "Minnesota"},
        {"11057", "KCLT", "Charlotte", "NC", "North Carolina"},
        {"14747", "KSEA", "Seattle", "WA", "Washington"},
    }};
    return kAirports;
}

struct FixtureRoute {
    int origin;  // index into fixture_airports()
    int dest;
    double distance;
    double weight;  // relative traffic share
};

// Ten city pairs flown in both directions: 20 routes covering all 12
// airports, hub-heavy traffic.
inline const std::array<FixtureRoute, 20>& fixture_routes() {
    static const std::array<FixtureRoute, 20> kRoutes = [] {
        const std::array<std::array<double, 3>, 10> pairs{{
            {0, 1, 606},    // ATL-ORD
            {0, 4, 731},    // ATL-DFW
            {1, 2, 888},    // ORD-DEN
            {2, 3, 862},    // DEN-LAX
            {3, 7, 337},    // LAX-SFO
            {4, 5, 224},    // DFW-IAH
            {6, 3, 370},    // PHX-LAX
            {8, 0, 760},    // JFK-ATL
            {9, 1, 334},    // MSP-ORD
            {10, 11, 2279}, // CLT-SEA
        }};
        const std::array<double, 10> weights{9, 8, 7, 6, 6, 5, 4, 4, 3, 2};
        std::array<FixtureRoute, 20> routes{};
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            int a = static_cast<int>(pairs[p][0]);
            int b = static_cast<int>(pairs[p][1]);
            routes[2 * p] = {a, b, pairs[p][2], weights[p]};
            routes[2 * p + 1] = {b, a, pairs[p][2], weights[p] * 0.9};
        }
        return routes;
    }();
    return kRoutes;
}

inline const std::vector<std::string>& fixture_carriers() {
    static const std::vector<std::string> kCarriers{"AA", "DL", "UA", "WN", "B6"};
    return kCarriers;
}

inline const std::vector<double>& fixture_carrier_weights() {
    static const std::vector<double> kWeights{0.28, 0.26, 0.22, 0.16, 0.08};
    return kWeights;
}

inline std::string fixture_tail(std::size_t i) {
    static const char* kSuffix[] = {"RA", "RB", "RC", "RD"};
    return "N" + std::to_string(411 + 7 * i) + kSuffix[i % 4];
}

inline std::size_t weighted_pick(const std::vector<double>& weights, double u) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double target = u * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace fixture_detail

// Deterministically builds a raw flight-record table (processed columns plus
// the diversion-specific ones) with a planted diversion signal: the rows with
// the highest combination of departure delay and taxi-out congestion are the
// diverted ones, so exactly floor(n_rows * rare_rate) positives exist and a
// classifier has something real to find. All additive time identities hold
// by construction, and every row flies one of 20 known routes between 12
// airports.
inline Table generate_fixture_corpus(std::uint64_t seed, std::size_t n_rows, double rare_rate) {
    using namespace fixture_detail;
    if (n_rows == 0) throw Error(Errc::invalid_argument, "fixture needs at least one row");
    if (!(rare_rate >= 0.0 && rare_rate <= 1.0))
        throw Error(Errc::invalid_argument, "rare_rate must be in [0,1]");

    const auto& airports = fixture_airports();
    const auto& routes = fixture_routes();
    std::vector<double> route_weights;
    for (const auto& r : routes) route_weights.push_back(r.weight);

    Rng rng(derive_seed(seed, 0x66697874));  // fixture stream

    const std::int64_t t0 = minutes_from_civil(2023, 1, 1, 0, 0);
    struct RowDraft {
        std::size_t route;
        std::size_t carrier;
        std::size_t tail;
        std::int64_t sched_dep;
        double dep_delta;
        double taxi_out;
        double taxi_in;
        double air_time;
        double sched_elapsed;
        double risk;
    };
    std::vector<RowDraft> drafts;
    drafts.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        RowDraft d;
        d.route = weighted_pick(route_weights, rng.uniform());
        d.carrier = weighted_pick(fixture_carrier_weights(), rng.uniform());
        d.tail = rng.index(36);
        std::int64_t day = rng.uniform_int(0, 364);
        std::int64_t minute = rng.uniform_int(300, 1380);  // 05:00 .. 23:00
        d.sched_dep = t0 + day * 1440 + minute;
        // Departure delay: mostly on time, with a heavy right tail.
        double u = rng.uniform();
        if (u < 0.55)
            d.dep_delta = static_cast<double>(rng.uniform_int(-8, 5));
        else if (u < 0.85)
            d.dep_delta = static_cast<double>(rng.uniform_int(6, 30));
        else if (u < 0.97)
            d.dep_delta = static_cast<double>(rng.uniform_int(31, 90));
        else
            d.dep_delta = static_cast<double>(rng.uniform_int(91, 240));
        d.taxi_out = std::clamp(std::round(8.0 + 6.0 * std::abs(rng.normal())), 5.0, 50.0);
        d.taxi_in = std::clamp(std::round(4.0 + 3.5 * std::abs(rng.normal())), 2.0, 30.0);
        double distance = routes[d.route].distance;
        d.air_time = std::max(std::round(distance / 7.4 + 7.0 * rng.normal()),
                              std::round(distance / 9.5));
        d.sched_elapsed = std::round(31.0 + distance / 7.4 + 4.0 * rng.normal());
        // Planted diversion propensity: late departures out of congested
        // taxiways divert more often, plus idiosyncratic noise.
        d.risk = (d.dep_delta - 10.0) / 25.0 + (d.taxi_out - 12.0) / 6.0 + 0.9 * rng.normal();
        drafts.push_back(d);
    }

    auto n_pos = static_cast<std::size_t>(
        std::floor(static_cast<double>(n_rows) * rare_rate + 1e-9));
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return drafts[a].risk > drafts[b].risk;
    });
    std::vector<char> diverted(n_rows, 0);
    for (std::size_t i = 0; i < n_pos && i < n_rows; ++i) diverted[order[i]] = 1;

    Table out;
    out.schema = raw_flight_schema();
    out.rows.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        const RowDraft& d = drafts[i];
        const FixtureRoute& route = routes[d.route];
        const FixtureAirport& o = airports[static_cast<std::size_t>(route.origin)];
        const FixtureAirport& dst = airports[static_cast<std::size_t>(route.dest)];

        double actual_elapsed = d.taxi_out + d.air_time + d.taxi_in;
        double div_elapsed = std::nan("");
        double div_distance = std::nan("");
        std::int64_t act_dep = d.sched_dep + static_cast<std::int64_t>(d.dep_delta);
        std::int64_t sched_arr = d.sched_dep + static_cast<std::int64_t>(d.sched_elapsed);
        std::int64_t wheels_off = act_dep + static_cast<std::int64_t>(d.taxi_out);

        double arrival_elapsed = actual_elapsed;
        if (diverted[i]) {
            div_elapsed = actual_elapsed + 45.0 +
                          static_cast<double>(rng.uniform_int(0, 120));
            div_distance = route.distance + 150.0 + static_cast<double>(rng.uniform_int(0, 250));
            arrival_elapsed = div_elapsed;
        }
        std::int64_t act_arr = act_dep + static_cast<std::int64_t>(arrival_elapsed);
        std::int64_t wheels_on = act_arr - static_cast<std::int64_t>(d.taxi_in);
        double arr_delta = static_cast<double>(act_arr - sched_arr);

        std::vector<Cell> r;
        r.reserve(33);
        r.emplace_back(fixture_carriers()[d.carrier]);
        r.emplace_back(fixture_tail(d.tail));
        r.emplace_back(std::string(o.id));
        r.emplace_back(std::string(o.icao));
        r.emplace_back(std::string(o.city));
        r.emplace_back(std::string(o.state_code));
        r.emplace_back(std::string(o.state_name));
        r.emplace_back(std::string(dst.id));
        r.emplace_back(std::string(dst.icao));
        r.emplace_back(std::string(dst.city));
        r.emplace_back(std::string(dst.state_code));
        r.emplace_back(std::string(dst.state_name));
        r.emplace_back(std::to_string(quarter_of(d.sched_dep)));
        r.emplace_back(std::to_string(day_of_week(d.sched_dep)));
        r.emplace_back(d.sched_dep);
        r.emplace_back(act_dep);
        r.emplace_back(d.dep_delta);
        r.emplace_back(d.dep_delta > kDelayThresholdMinutes);
        r.emplace_back(d.taxi_out);
        r.emplace_back(wheels_off);
        r.emplace_back(wheels_on);
        r.emplace_back(d.taxi_in);
        r.emplace_back(sched_arr);
        r.emplace_back(act_arr);
        r.emplace_back(arr_delta);
        r.emplace_back(arr_delta > kDelayThresholdMinutes);
        r.emplace_back(d.sched_elapsed);
        r.emplace_back(diverted[i] ? std::nan("") : actual_elapsed);
        r.emplace_back(diverted[i] ? std::nan("") : d.air_time);
        r.emplace_back(route.distance);
        r.emplace_back(static_cast<bool>(diverted[i]));
        r.emplace_back(div_elapsed);
        r.emplace_back(div_distance);
        out.rows.push_back(std::move(r));
    }
    return out;
}

}  // namespace raresynth
