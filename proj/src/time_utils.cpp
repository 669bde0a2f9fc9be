#include "geyser/time_utils.hpp"

#include <charconv>
#include <cstdio>

namespace geyser {

// Howard Hinnant's civil-date algorithms (public domain); exact over the
// full proleptic Gregorian calendar, no locale or tz dependence.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool parse_uint_fixed(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

unsigned days_in_month(int year, unsigned month) {
    static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

} // namespace

bool parse_epoch_seconds(std::string_view text, EpochSeconds& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;  // from_chars rejects a leading '+'
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return false;
    out = v;
    return true;
}

bool parse_iso8601(std::string_view s, EpochSeconds& out) {
    // Date: YYYY-MM-DD (4-digit year; longer years are not seen in exports)
    unsigned uy = 0, mo = 0, dy = 0;
    if (!parse_uint_fixed(s, 0, 4, uy)) return false;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return false;
    if (!parse_uint_fixed(s, 5, 2, mo) || !parse_uint_fixed(s, 8, 2, dy)) return false;
    const int year = static_cast<int>(uy);
    if (mo < 1 || mo > 12 || dy < 1 || dy > days_in_month(year, mo)) return false;

    if (s.size() < 16) return false;
    if (s[10] != 'T' && s[10] != ' ') return false;
    unsigned hh = 0, mi = 0, ss = 0;
    if (!parse_uint_fixed(s, 11, 2, hh) || s[13] != ':' || !parse_uint_fixed(s, 14, 2, mi))
        return false;
    if (hh > 23 || mi > 59) return false;

    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!parse_uint_fixed(s, pos + 1, 2, ss) || ss > 59) return false;
        pos += 3;
    }

    std::int64_t offset_s = 0;  // seconds east of UTC
    if (pos < s.size()) {
        const char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            unsigned oh = 0, om = 0;
            if (!parse_uint_fixed(s, pos + 1, 2, oh)) return false;
            std::size_t opos = pos + 3;
            if (opos < s.size() && s[opos] == ':') ++opos;
            if (!parse_uint_fixed(s, opos, 2, om)) return false;
            pos = opos + 2;
            if (oh > 23 || om > 59) return false;
            offset_s = static_cast<std::int64_t>(oh) * 3600 + om * 60;
            if (c == '-') offset_s = -offset_s;
        } else {
            return false;
        }
    }
    if (pos != s.size()) return false;

    out = days_from_civil(year, mo, dy) * 86400 + hh * 3600 + mi * 60 + ss - offset_s;
    return true;
}

std::string format_iso8601_utc(EpochSeconds t) {
    std::int64_t days = t / 86400;
    std::int64_t sod = t % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    int year = 0;
    unsigned month = 0, day = 0;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year, month, day,
                  static_cast<long long>(sod / 3600), static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

} // namespace geyser
