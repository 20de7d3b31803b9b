#include "prmsda/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "prmsda/errors.hpp"

namespace prmsda {

namespace {

std::chrono::year_month_day ymd(std::chrono::sys_days d) { return std::chrono::year_month_day{d}; }

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("invalid date '" + std::string(whole) + "' (expected YYYY-MM-DD)");
  }
  return v;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day d{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!d.ok()) {
    throw ParseError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                     std::to_string(day));
  }
  days_ = std::chrono::sys_days{d};
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  return Date(parse_int(text.substr(0, 4), text), static_cast<unsigned>(parse_int(text.substr(5, 2), text)),
              static_cast<unsigned>(parse_int(text.substr(8, 2), text)));
}

int Date::year() const { return static_cast<int>(ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(ymd(days_).day()); }

int Date::day_of_year() const {
  const auto jan1 = std::chrono::sys_days{std::chrono::year{year()} / std::chrono::January / 1};
  return static_cast<int>((days_ - jan1).count()) + 1;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

}  // namespace prmsda
