#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ldq {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

Timestamp now_utc();

/// xsd:dateTime in UTC with microsecond precision, e.g.
/// `2015-07-01T12:00:00.000000Z`.
std::string format_timestamp(Timestamp ts);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fraction](Z|+00:00)`.
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace ldq
