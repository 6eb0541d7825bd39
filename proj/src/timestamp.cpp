#include "paraloq/timestamp.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "paraloq/error.hpp"

namespace paraloq {

namespace {

std::tm to_utc(std::int64_t epoch_ms, int& millis) {
  std::int64_t secs = epoch_ms / 1000;
  std::int64_t ms = epoch_ms % 1000;
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  millis = static_cast<int>(ms);
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return tm;
}

}  // namespace

std::string format_iso8601_ms(std::int64_t epoch_ms) {
  int ms = 0;
  const std::tm tm = to_utc(epoch_ms, ms);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
  return buf;
}

std::string format_iso8601_basic(std::int64_t epoch_ms) {
  int ms = 0;
  const std::tm tm = to_utc(epoch_ms, ms);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::int64_t parse_iso8601_ms(std::string_view text) {
  std::tm tm{};
  int ms = 0;
  char z = 0;
  const std::string s(text);
  int consumed = 0;
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c%n", &tm.tm_year, &tm.tm_mon,
                            &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &z, &consumed);
  if (n != 8 || z != 'Z' || consumed != static_cast<int>(s.size()) || s.size() != 24) {
    fail(ErrorKind::kParse, "bad ISO-8601 timestamp '" + s + "'");
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  const std::int64_t secs = timegm(&tm);
  const std::int64_t out = secs * 1000 + ms;
  if (format_iso8601_ms(out) != s) fail(ErrorKind::kParse, "out-of-range timestamp '" + s + "'");
  return out;
}

std::int64_t now_epoch_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace paraloq
