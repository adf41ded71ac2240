#include "rfidac/time.hpp"

#include <charconv>
#include <cstdio>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

using namespace std::chrono;

[[noreturn]] void bad_time(std::string_view text) {
  throw Error(Errc::InvalidArgument, "invalid date/time: '" + std::string(text) + "'");
}

// Reads exactly `width` digits (or 1..width when `width_min` is smaller) at `pos`.
int take_int(std::string_view text, std::size_t& pos, std::size_t width_min,
             std::size_t width_max) {
  std::size_t end = pos;
  while (end < text.size() && end - pos < width_max && text[end] >= '0' && text[end] <= '9') {
    ++end;
  }
  if (end - pos < width_min) bad_time(text);
  int value = 0;
  std::from_chars(text.data() + pos, text.data() + end, value);
  pos = end;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad_time(text);
  ++pos;
}

Date make_date(std::string_view text, int y, int m, int d) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad_time(text);
  return sys_days{ymd};
}

milliseconds make_time_of_day(std::string_view text, int h, int mi, int s, int ms) {
  if (h > 23 || mi > 59 || s > 59) bad_time(text);
  return hours{h} + minutes{mi} + seconds{s} + milliseconds{ms};
}

}  // namespace

std::string format_iso8601(Instant t) {
  const auto day_start = floor<days>(t);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{t - day_start};
  char buf[40];
  const auto ms = hms.subseconds().count();
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()), static_cast<int>(ms));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
  }
  return buf;
}

Instant parse_iso8601(std::string_view text) {
  std::size_t pos = 0;
  const int y = take_int(text, pos, 4, 4);
  expect(text, pos, '-');
  const int mo = take_int(text, pos, 2, 2);
  expect(text, pos, '-');
  const int d = take_int(text, pos, 2, 2);
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) bad_time(text);
  ++pos;
  const int h = take_int(text, pos, 2, 2);
  expect(text, pos, ':');
  const int mi = take_int(text, pos, 2, 2);
  expect(text, pos, ':');
  const int s = take_int(text, pos, 2, 2);
  int ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    ms = take_int(text, pos, 1, 3);
    for (std::size_t digits = pos - start; digits < 3; ++digits) ms *= 10;
  }
  expect(text, pos, 'Z');
  if (pos != text.size()) bad_time(text);
  return Instant{make_date(text, y, mo, d).time_since_epoch() + make_time_of_day(text, h, mi, s, ms)};
}

std::string format_report_date(Instant t) {
  const year_month_day ymd{floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02u/%02u/%04d", static_cast<unsigned>(ymd.day()),
                static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()));
  return buf;
}

std::string format_report_time(Instant t) {
  const hh_mm_ss hms{t - floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return buf;
}

Date parse_report_date(std::string_view text) {
  std::size_t pos = 0;
  const int d = take_int(text, pos, 1, 2);
  expect(text, pos, '/');
  const int m = take_int(text, pos, 1, 2);
  expect(text, pos, '/');
  const int y = take_int(text, pos, 4, 4);
  if (pos != text.size()) bad_time(text);
  return make_date(text, y, m, d);
}

Instant parse_report_datetime(std::string_view date, std::string_view time) {
  const Date day = parse_report_date(date);
  std::size_t pos = 0;
  const int h = take_int(time, pos, 1, 2);
  expect(time, pos, ':');
  const int mi = take_int(time, pos, 2, 2);
  expect(time, pos, ':');
  const int s = take_int(time, pos, 2, 2);
  if (pos != time.size()) bad_time(time);
  return Instant{day.time_since_epoch() + make_time_of_day(time, h, mi, s, 0)};
}

Instant parse_instant(std::string_view text) {
  if (text.size() >= 5 && text[4] == '-') return parse_iso8601(text);
  const auto space = text.find(' ');
  if (space == std::string_view::npos) {
    return Instant{parse_report_date(text).time_since_epoch()};
  }
  return parse_report_datetime(text.substr(0, space), text.substr(space + 1));
}

Date date_of(Instant t) { return floor<days>(t); }

}  // namespace rfidac
