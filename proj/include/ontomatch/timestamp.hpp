#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ontomatch {

using Timestamp = std::chrono::sys_seconds;

// Accepts YYYY-MM-DD (midnight UTC) or YYYY-MM-DDTHH:MM:SS[.fraction]Z.
std::optional<Timestamp> parse_timestamp(std::string_view text);
Timestamp parse_timestamp_or_throw(std::string_view text);
std::string format_timestamp(Timestamp t);
Timestamp now_utc();

// Whole years elapsed between two instants (calendar-aware).
int years_between(Timestamp from, Timestamp to);

}  // namespace ontomatch
