#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace prmsda {

/// Calendar day. Thin wrapper over std::chrono::sys_days with ISO-8601 I/O.
class Date {
 public:
  Date() = default;
  Date(int year, unsigned month, unsigned day);
  explicit Date(std::chrono::sys_days days) : days_(days) {}

  /// Parses "YYYY-MM-DD". Throws ParseError.
  static Date parse(std::string_view text);

  int year() const;
  unsigned month() const;
  unsigned day() const;
  /// 1-based day of year (1..366).
  int day_of_year() const;

  Date operator+(int n) const { return Date(days_ + std::chrono::days{n}); }
  Date operator-(int n) const { return Date(days_ - std::chrono::days{n}); }
  int operator-(const Date& other) const { return static_cast<int>((days_ - other.days_).count()); }
  Date& operator++() {
    days_ += std::chrono::days{1};
    return *this;
  }

  auto operator<=>(const Date&) const = default;

  std::string iso() const;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace prmsda
