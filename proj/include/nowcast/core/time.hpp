#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace nowcast {

using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)". Fractional seconds
/// are truncated. Throws ParseError.
Timestamp parse_rfc3339(std::string_view text);

/// Always UTC with a trailing 'Z'.
std::string format_rfc3339(Timestamp ts);

/// Durations such as "300", "300s", "5m", "1h", "1.5s". Bare numbers are seconds.
/// Sub-second parts are kept as milliseconds.
std::chrono::milliseconds parse_duration(std::string_view text);

/// "+05:30", "-04:00", "Z" or "0" -> signed offset from UTC.
std::chrono::minutes parse_utc_offset(std::string_view text);
std::string format_utc_offset(std::chrono::minutes offset);

/// "09:30" -> minutes after midnight.
std::chrono::minutes parse_time_of_day(std::string_view text);
std::string format_time_of_day(std::chrono::minutes tod);

/// Market session hours in local market time.
struct SessionHours {
    std::chrono::minutes open{9 * 60 + 30};
    std::chrono::minutes close{15 * 60 + 30};
    std::chrono::minutes utc_offset{0};

    /// Local calendar day of an instant.
    std::chrono::sys_days local_date(Timestamp ts) const;
    std::chrono::minutes local_time_of_day(Timestamp ts) const;
    /// open <= local time <= close
    bool contains(Timestamp ts) const;
    Timestamp open_at(std::chrono::sys_days local_day) const;
    Timestamp close_at(std::chrono::sys_days local_day) const;

    bool operator==(const SessionHours&) const = default;
};

std::string format_date(std::chrono::sys_days day);

}  // namespace nowcast
