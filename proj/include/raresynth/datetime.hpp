#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

namespace raresynth {

// Timestamps are carried internally as whole minutes since the Unix epoch
// (UTC). This sentinel marks a missing datetime cell.
inline constexpr std::int64_t kMissingMinutes = std::numeric_limits<std::int64_t>::min();

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    auto yoe = static_cast<unsigned>(y - era * 400);                           // [0, 399]
    unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;            // [0, 365]
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;                      // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    auto doe = static_cast<unsigned>(z - era * 146097);                        // [0, 146096]
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;      // [0, 399]
    std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);                    // [0, 365]
    unsigned mp = (5 * doy + 2) / 153;                                         // [0, 11]
    unsigned d = doy - (153 * mp + 2) / 5 + 1;                                 // [1, 31]
    unsigned m = mp < 10 ? mp + 3 : mp - 9;                                    // [1, 12]
    return {y + (m <= 2), m, d};
}

}  // namespace detail

inline std::int64_t minutes_from_civil(std::int64_t y, unsigned mo, unsigned d, unsigned h,
                                       unsigned mi) {
    return detail::days_from_civil(y, mo, d) * 1440 + static_cast<std::int64_t>(h) * 60 + mi;
}

// "YYYY-MM-DDTHH:MM:SSZ". Seconds are always emitted as 00 because the
// internal unit is minutes.
inline std::string format_iso(std::int64_t minutes) {
    if (minutes == kMissingMinutes) return "";
    std::int64_t days = minutes / 1440;
    std::int64_t rem = minutes % 1440;
    if (rem < 0) {
        rem += 1440;
        days -= 1;
    }
    detail::CivilDate cd = detail::civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:00Z",
                  static_cast<long long>(cd.year), cd.month, cd.day,
                  static_cast<long long>(rem / 60), static_cast<long long>(rem % 60));
    return std::string(buf);
}

// Accepts "YYYY-MM-DDTHH:MM:SSZ" and "YYYY-MM-DDTHH:MMZ"; a space is allowed
// instead of 'T'. Sub-minute precision must be zero.
inline std::optional<std::int64_t> parse_iso(const std::string& s) {
    auto digit = [&](std::size_t i) -> int {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return -1;
        return s[i] - '0';
    };
    auto num2 = [&](std::size_t i) -> int {
        int a = digit(i);
        int b = digit(i + 1);
        if (a < 0 || b < 0) return -1;
        return a * 10 + b;
    };
    if (s.size() < 16) return std::nullopt;
    int y = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        int d = digit(i);
        if (d < 0) return std::nullopt;
        y = y * 10 + d;
    }
    if (s[4] != '-' || s[7] != '-') return std::nullopt;
    int mo = num2(5);
    int da = num2(8);
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int h = num2(11);
    int mi = num2(14);
    if (mo < 1 || mo > 12 || da < 1 || da > 31 || h < 0 || h > 23 || mi < 0 || mi > 59)
        return std::nullopt;
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        int sec = num2(pos + 1);
        if (sec != 0) return std::nullopt;
        pos += 3;
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
    if (pos != s.size()) return std::nullopt;
    return minutes_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(da),
                              static_cast<unsigned>(h), static_cast<unsigned>(mi));
}

// Calendar quarter 1..4 of the timestamp.
inline int quarter_of(std::int64_t minutes) {
    std::int64_t days = minutes / 1440;
    if (minutes % 1440 < 0) days -= 1;
    return (static_cast<int>(detail::civil_from_days(days).month) - 1) / 3 + 1;
}

// ISO day of week: 1 = Monday .. 7 = Sunday.
inline int day_of_week(std::int64_t minutes) {
    std::int64_t days = minutes / 1440;
    if (minutes % 1440 < 0) days -= 1;
    return static_cast<int>(((days % 7) + 10) % 7) + 1;  // day 0 (1970-01-01) was a Thursday
}

}  // namespace raresynth
