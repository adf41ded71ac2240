#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rfidac {

/// Wall or simulated instant, UTC, millisecond resolution.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Date = std::chrono::sys_days;

/// `2021-09-23T15:21:18Z`; a `.mmm` fraction is emitted only when non-zero.
std::string format_iso8601(Instant t);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fff]Z` (a space may replace the `T`).
/// Throws Error(InvalidArgument) on anything else.
Instant parse_iso8601(std::string_view text);

/// Report rendering: zero-padded `dd/mm/yyyy` and `HH:MM:SS`.
std::string format_report_date(Instant t);
std::string format_report_time(Instant t);

/// `d/m/yyyy` with or without zero padding.
Date parse_report_date(std::string_view text);

/// Inverse of the report rendering; the result is whole seconds.
Instant parse_report_datetime(std::string_view date, std::string_view time);

/// Accepts either ISO-8601 or `dd/mm/yyyy[ HH:MM:SS]`.
Instant parse_instant(std::string_view text);

Date date_of(Instant t);

}  // namespace rfidac
