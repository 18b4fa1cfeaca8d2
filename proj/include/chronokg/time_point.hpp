#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chronokg {

/// A point on the closed time axis: either a finite integer tick or one of
/// the two sentinels bounding all finite ticks. Ticks are abstract; callers
/// decide whether a tick means a year, a day, or anything else totally
/// ordered.
class TimePoint {
 public:
  /// Default-constructs the finite tick 0.
  constexpr TimePoint() = default;

  static constexpr TimePoint neg_inf() { return TimePoint(Kind::NegInf, 0); }
  static constexpr TimePoint pos_inf() { return TimePoint(Kind::PosInf, 0); }
  static constexpr TimePoint at(std::int64_t tick) {
    return TimePoint(Kind::Finite, tick);
  }

  constexpr bool finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }

  /// The integer tick; only finite points carry one.
  constexpr std::int64_t tick() const {
    if (!finite()) throw std::logic_error("TimePoint::tick on a sentinel");
    return tick_;
  }

  // Total order: -inf < every finite tick < +inf. All -inf instances compare
  // equal, likewise all +inf instances.
  friend constexpr auto operator<=>(const TimePoint&,
                                    const TimePoint&) = default;

 private:
  enum class Kind : std::int8_t { NegInf = -1, Finite = 0, PosInf = 1 };

  constexpr TimePoint(Kind kind, std::int64_t tick)
      : kind_(kind), tick_(tick) {}

  Kind kind_ = Kind::Finite;
  std::int64_t tick_ = 0;  // always 0 for sentinels so that == is memberwise
};

inline std::string to_string(const TimePoint& t) {
  if (t.is_neg_inf()) return "-inf";
  if (t.is_pos_inf()) return "inf";
  return std::to_string(t.tick());
}

}  // namespace chronokg
