#pragma once

#include <cstdint>
#include <string>

namespace chillops {

/// Seconds since the Unix epoch, UTC. All plant and weather timestamps use
/// this representation; sub-minute precision is never required.
using TimePoint = std::int64_t;

inline constexpr std::int64_t kSecPerMin = 60;
inline constexpr std::int64_t kSecPerHour = 3600;
inline constexpr std::int64_t kSecPerDay = 86400;
inline constexpr std::int64_t kSlotSeconds = 1800;  // canonical half-hour grid

struct CivilTime {
  int year;
  int month;  // 1..12
  int day;    // 1..31
  int hour;
  int minute;
  int second;
};

/// Parses "YYYY-MM-DDTHH:MM[:SS]" (a trailing 'Z' is accepted). Throws
/// InputError on malformed input.
TimePoint parse_iso8601(const std::string& s);

/// Formats as "YYYY-MM-DDTHH:MM:SS".
std::string format_iso8601(TimePoint t);

CivilTime to_civil(TimePoint t);
TimePoint from_civil(const CivilTime& c);

/// 0 = Monday ... 6 = Sunday.
int weekday(TimePoint t);

/// Saturdays and Sundays are off-days; holidays are handled by callers.
inline bool is_weekend(TimePoint t) { return weekday(t) >= 5; }

/// Minutes since local midnight of the day containing t.
inline int minutes_of_day(TimePoint t) {
  std::int64_t s = ((t % kSecPerDay) + kSecPerDay) % kSecPerDay;
  return static_cast<int>(s / kSecPerMin);
}

/// Parses "HH:MM" into minutes since midnight.
int parse_hhmm(const std::string& s);

/// Formats minutes since midnight as "HH:MM" (e.g. schedule columns).
std::string format_hhmm(int minutes);

}  // namespace chillops
