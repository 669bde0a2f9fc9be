#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace geyser {

/// Seconds since the Unix epoch, UTC. The canonical internal time unit.
using EpochSeconds = std::int64_t;

/// Days since 1970-01-01 for a proleptic-Gregorian civil date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

/// Strict integer epoch-seconds parse ("1262304000", optional sign).
/// Returns false on anything else (fractions, trailing junk, empty).
bool parse_epoch_seconds(std::string_view text, EpochSeconds& out);

/// ISO-8601 timestamp: YYYY-MM-DD[T ]HH:MM[:SS] followed by an optional
/// offset (Z, +HH:MM, -HH:MM or +HHMM). A missing offset means UTC.
/// Returns false on malformed text or out-of-range fields.
bool parse_iso8601(std::string_view text, EpochSeconds& out);

std::string format_iso8601_utc(EpochSeconds t);

} // namespace geyser
