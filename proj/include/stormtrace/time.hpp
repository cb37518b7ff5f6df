#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "stormtrace/error.hpp"

namespace stormtrace {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t seconds_per_day = 86400;

constexpr std::chrono::seconds whole_days(std::int64_t n) { return std::chrono::seconds(n * seconds_per_day); }

namespace detail {

inline bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM|+HHMM)` to a UTC
/// instant. Fractional seconds are truncated. A missing offset is rejected.
inline Timestamp parse_timestamp(std::string_view s) {
  auto fail = [&] { return error(errc::bad_timestamp, "cannot parse '" + std::string(s) + "'"); };
  int y, mo, d, h, mi, sec;
  if (s.size() < 20) throw fail();
  if (!detail::read_digits(s, 0, 4, y) || s[4] != '-' || !detail::read_digits(s, 5, 2, mo) || s[7] != '-' ||
      !detail::read_digits(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      !detail::read_digits(s, 11, 2, h) || s[13] != ':' || !detail::read_digits(s, 14, 2, mi) || s[16] != ':' ||
      !detail::read_digits(s, 17, 2, sec))
    throw fail();
  if (h > 23 || mi > 59 || sec > 59) throw fail();

  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw fail();

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw fail();
  }
  if (pos >= s.size()) throw fail();

  int offset_minutes = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int sign = s[pos] == '-' ? -1 : 1;
    int oh, om;
    if (!detail::read_digits(s, pos + 1, 2, oh)) throw fail();
    std::size_t mpos = pos + 3;
    if (mpos < s.size() && s[mpos] == ':') ++mpos;
    if (!detail::read_digits(s, mpos, 2, om)) throw fail();
    if (oh > 23 || om > 59) throw fail();
    offset_minutes = sign * (oh * 60 + om);
    pos = mpos + 2;
  } else {
    throw fail();
  }
  if (pos != s.size()) throw fail();

  auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return Timestamp{local - minutes{offset_minutes}};
}

/// `YYYY-MM-DDTHH:MM:SSZ`.
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_point = floor<std::chrono::days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace stormtrace
