#include "chillops/time_util.hpp"

#include <cctype>
#include <cstdio>

#include "chillops/common.hpp"

namespace chillops {

namespace {

// Days from civil date, epoch 1970-01-01 (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

int parse_int(const std::string& s, size_t pos, size_t len) {
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw InputError("malformed timestamp: '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

TimePoint parse_iso8601(const std::string& raw) {
  std::string s = raw;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.pop_back();
  // YYYY-MM-DDTHH:MM[:SS], 'T' or space separator
  if (s.size() != 16 && s.size() != 19)
    throw InputError("malformed timestamp: '" + raw + "'");
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
    throw InputError("malformed timestamp: '" + raw + "'");
  CivilTime c{};
  c.year = parse_int(s, 0, 4);
  c.month = parse_int(s, 5, 2);
  c.day = parse_int(s, 8, 2);
  c.hour = parse_int(s, 11, 2);
  c.minute = parse_int(s, 14, 2);
  c.second = 0;
  if (s.size() == 19) {
    if (s[16] != ':') throw InputError("malformed timestamp: '" + raw + "'");
    c.second = parse_int(s, 17, 2);
  }
  if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
      c.minute > 59 || c.second > 59)
    throw InputError("timestamp field out of range: '" + raw + "'");
  return from_civil(c);
}

std::string format_iso8601(TimePoint t) {
  CivilTime c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

CivilTime to_civil(TimePoint t) {
  std::int64_t days = t / kSecPerDay;
  std::int64_t rem = t % kSecPerDay;
  if (rem < 0) {
    rem += kSecPerDay;
    --days;
  }
  CivilTime c{};
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / kSecPerHour);
  c.minute = static_cast<int>((rem / kSecPerMin) % 60);
  c.second = static_cast<int>(rem % 60);
  return c;
}

TimePoint from_civil(const CivilTime& c) {
  return days_from_civil(c.year, c.month, c.day) * kSecPerDay +
         c.hour * kSecPerHour + c.minute * kSecPerMin + c.second;
}

int weekday(TimePoint t) {
  std::int64_t days = t / kSecPerDay;
  if (t % kSecPerDay < 0) --days;
  // 1970-01-01 was a Thursday (index 3 with Monday = 0).
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

int parse_hhmm(const std::string& s) {
  if (s.size() != 5 || s[2] != ':')
    throw ConfigError("expected HH:MM, got '" + s + "'");
  int h = parse_int(s, 0, 2);
  int m = parse_int(s, 3, 2);
  if (h > 24 || m > 59) throw ConfigError("time of day out of range: '" + s + "'");
  return h * 60 + m;
}

std::string format_hhmm(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

}  // namespace chillops
