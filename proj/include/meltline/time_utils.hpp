#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace meltline {

/// Seconds since the Unix epoch, UTC. A double holds integer second counts
/// exactly far beyond any plausible telemetry range, and fractional seconds
/// when a source provides them.
using EpochSeconds = double;

inline constexpr double kSecondsPerHour = 3600.0;

/// Parse an ISO-8601 timestamp: "YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|+HHMM|+HH]".
/// A missing zone designator is read as UTC.
EpochSeconds parseIso8601(std::string_view text);

bool tryParseIso8601(std::string_view text, EpochSeconds& out);

/// Format as "YYYY-MM-DDTHH:MM:SSZ" (UTC), appending up to six fractional
/// digits when the value is not a whole second.
std::string formatIso8601(EpochSeconds t);

std::int64_t daysFromCivil(int year, unsigned month, unsigned day);
void civilFromDays(std::int64_t days, int& year, unsigned& month, unsigned& day);

} // namespace meltline
