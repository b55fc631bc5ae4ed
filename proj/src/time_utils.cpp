#include "meltline/time_utils.hpp"

#include "meltline/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace meltline {

// Howard Hinnant's civil-date algorithms.
std::int64_t daysFromCivil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civilFromDays(std::int64_t z, int& year, unsigned& month, unsigned& day) {
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

bool parseFixedInt(std::string_view s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace

bool tryParseIso8601(std::string_view s, EpochSeconds& out) {
    // Trim surrounding whitespace.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);

    int year, month, day, hour, minute, second;
    if (!parseFixedInt(s, 0, 4, year)) return false;
    if (s.size() < 19 || s[4] != '-' || s[7] != '-') return false;
    if (!parseFixedInt(s, 5, 2, month) || !parseFixedInt(s, 8, 2, day)) return false;
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return false;
    if (s[13] != ':' || s[16] != ':') return false;
    if (!parseFixedInt(s, 11, 2, hour) || !parseFixedInt(s, 14, 2, minute) ||
        !parseFixedInt(s, 17, 2, second)) return false;
    if (month < 1 || month > 12 || day < 1 || hour > 23 || minute > 59 || second > 60)
        return false;
    static constexpr int kDaysInMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (day > kDaysInMonth[month - 1] + ((month == 2 && leap) ? 1 : 0)) return false;

    size_t pos = 19;
    double frac = 0.0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        double scale = 0.1;
        size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            frac += (s[pos] - '0') * scale;
            scale *= 0.1;
            ++pos;
            ++digits;
        }
        if (digits == 0) return false;
    }

    int offsetSec = 0;
    if (pos < s.size()) {
        char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int sign = (c == '+') ? 1 : -1;
            ++pos;
            int oh = 0, om = 0;
            if (!parseFixedInt(s, pos, 2, oh)) return false;
            pos += 2;
            if (pos < s.size() && s[pos] == ':') ++pos;
            if (pos < s.size()) {
                if (!parseFixedInt(s, pos, 2, om)) return false;
                pos += 2;
            }
            offsetSec = sign * (oh * 3600 + om * 60);
        } else {
            return false;
        }
    }
    if (pos != s.size()) return false;

    const std::int64_t days = daysFromCivil(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day));
    out = static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second +
          frac - offsetSec;
    return true;
}

EpochSeconds parseIso8601(std::string_view text) {
    EpochSeconds t;
    if (!tryParseIso8601(text, t))
        fail("BadTimestamp", "not an ISO-8601 timestamp: '" + std::string(text) + "'");
    return t;
}

std::string formatIso8601(EpochSeconds t) {
    const double wholeSec = std::floor(t);
    double frac = t - wholeSec;
    std::int64_t total = static_cast<std::int64_t>(wholeSec);
    std::int64_t days = total / 86400;
    std::int64_t sod = total % 86400;
    if (sod < 0) {
        sod += 86400;
        days -= 1;
    }
    int year;
    unsigned month, day;
    civilFromDays(days, year, month, day);
    const int hour = static_cast<int>(sod / 3600);
    const int minute = static_cast<int>((sod % 3600) / 60);
    const int second = static_cast<int>(sod % 60);

    char buf[48];
    if (frac > 0.0) {
        // Round to microseconds; carrying into the next second is not worth
        // handling here, values that close to a boundary format as .999999.
        long micro = std::lround(frac * 1e6);
        if (micro > 999999) micro = 999999;
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%06ldZ", year, month,
                      day, hour, minute, second, micro);
        std::string out(buf);
        while (out.size() > 2 && out[out.size() - 2] == '0' && out[out.size() - 3] != '.')
            out.erase(out.size() - 2, 1);
        return out;
    }
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", year, month, day, hour,
                  minute, second);
    return buf;
}

} // namespace meltline
