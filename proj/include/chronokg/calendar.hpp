#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chronokg {

/// How the CLI maps human-readable instants onto abstract ticks. The core
/// never sees calendars; files always carry raw ticks.
enum class Calendar { Year, DaysSinceEpoch };

inline std::optional<Calendar> calendar_from_name(std::string_view name) {
  if (name == "year") return Calendar::Year;
  if (name == "days-since-epoch") return Calendar::DaysSinceEpoch;
  return std::nullopt;
}

inline std::string to_string(Calendar c) {
  return c == Calendar::Year ? "year" : "days-since-epoch";
}

namespace detail {

inline std::optional<std::int64_t> calendar_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> days_from_iso_date(std::string_view s) {
  // YYYY-MM-DD, days since 1970-01-01.
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto year = calendar_int(s.substr(0, 4));
  auto month = calendar_int(s.substr(5, 2));
  auto day = calendar_int(s.substr(8, 2));
  if (!year || !month || !day) return std::nullopt;
  const std::chrono::year_month_day ymd{
      std::chrono::year(static_cast<int>(*year)),
      std::chrono::month(static_cast<unsigned>(*month)),
      std::chrono::day(static_cast<unsigned>(*day))};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

}  // namespace detail

/// Parses a finite tick. Plain integers pass through in both calendars; the
/// day calendar additionally accepts ISO dates (`2020-01-31`).
inline std::optional<std::int64_t> parse_tick(std::string_view text, Calendar calendar) {
  if (auto v = detail::calendar_int(text)) return v;
  if (calendar == Calendar::DaysSinceEpoch) return detail::days_from_iso_date(text);
  return std::nullopt;
}

}  // namespace chronokg
