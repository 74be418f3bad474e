#include "xsess/core/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace xsess {

namespace {

// Days from 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::array<int, 3> civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

int parse_int(const std::string& s, std::size_t pos, std::size_t len) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
      fail("bad timestamp '" + s + "'");
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  if (all_digits(text)) {
    const Timestamp t = std::stoll(text);
    if (t < 0) fail("bad timestamp '" + text + "': negative epoch seconds");
    return t;
  }
  // YYYY-MM-DD[T ]HH:MM:SS[Z]
  std::string s = text;
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    fail("bad timestamp '" + text + "': expected ISO-8601 or epoch seconds");
  }
  const int year = parse_int(s, 0, 4);
  const int month = parse_int(s, 5, 2);
  const int day = parse_int(s, 8, 2);
  const int hour = parse_int(s, 11, 2);
  const int minute = parse_int(s, 14, 2);
  const int second = parse_int(s, 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    fail("bad timestamp '" + text + "': field out of range");
  }
  const Timestamp t =
      days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
  if (t < 0) fail("bad timestamp '" + text + "': before epoch");
  return t;
}

std::string format_timestamp(Timestamp t) {
  const std::int64_t days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  const int secs = static_cast<int>(t - days * 86400);
  const auto [y, m, d] = civil_from_days(days);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d, secs / 3600,
                (secs / 60) % 60, secs % 60);
  return buf;
}

}  // namespace xsess
