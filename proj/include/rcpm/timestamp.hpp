#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace rcpm {

/// UTC instant with microsecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// Format token accepted by parse_timestamp() meaning "any ISO-8601 date-time".
inline constexpr std::string_view kIsoFormat = "ISO8601";

/// Parses an ISO-8601 date-time such as `2012-03-31T18:09:05.000+02:00`.
///
/// Accepts `T` or a single space between date and time, an optional
/// fractional second of any length (truncated to microseconds) and an
/// optional `Z` / `+HH:MM` / `+HHMM` / `+HH` offset. A missing offset means
/// UTC. A bare date is midnight UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Parses `text` against a strptime-like `format`.
///
/// Supported conversions: `%Y %m %d %H %M %S %f %z %%`. `%f` consumes one or
/// more fractional-second digits, `%z` an offset as in parse_iso8601().
/// Every other format character must match literally. The whole of `text`
/// must be consumed. `format == kIsoFormat` delegates to parse_iso8601().
std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format);

/// `YYYY-MM-DDTHH:MM:SS.ffffffZ`
std::string format_iso8601(Timestamp ts);

}  // namespace rcpm
