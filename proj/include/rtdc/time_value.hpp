#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace rtdc {

/// Exact time value: a finite rational or one of the two infinities.
///
/// All arithmetic is exact. Infinities only make sense as interval bounds;
/// adding +inf to -inf throws std::domain_error.
class TimeValue {
public:
  using Rational = boost::rational<std::int64_t>;

  TimeValue() = default;
  TimeValue(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit TimeValue(Rational r) : value_(r) {}
  TimeValue(std::int64_t num, std::int64_t den) : value_(num, den) {}

  static TimeValue infinity() { return TimeValue(Kind::pos_inf); }
  static TimeValue neg_infinity() { return TimeValue(Kind::neg_inf); }

  /// Parses "12", "-3.25", "7/3", "inf", "+inf", "-inf".
  /// Throws std::invalid_argument on malformed text.
  static TimeValue parse(std::string_view text);

  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  /// Precondition: is_finite().
  const Rational& rational() const { return value_; }

  double to_double() const;

  /// Canonical text: shortest exact decimal when one exists, "p/q" otherwise,
  /// "inf" / "-inf" for infinities.
  std::string to_string() const;

  /// Decimal with at least `min_digits` fraction digits when the value has a
  /// terminating decimal expansion; falls back to to_string() otherwise.
  std::string to_fixed(int min_digits) const;

  TimeValue operator-() const;
  TimeValue& operator+=(const TimeValue& rhs);
  TimeValue& operator-=(const TimeValue& rhs) { return *this += -rhs; }

  friend TimeValue operator+(TimeValue lhs, const TimeValue& rhs) { return lhs += rhs; }
  friend TimeValue operator-(TimeValue lhs, const TimeValue& rhs) { return lhs -= rhs; }

  friend bool operator==(const TimeValue& a, const TimeValue& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const TimeValue& a, const TimeValue& b);

  friend std::ostream& operator<<(std::ostream& os, const TimeValue& t) { return os << t.to_string(); }

private:
  enum class Kind : std::uint8_t { finite, pos_inf, neg_inf };
  explicit TimeValue(Kind k) : kind_(k) {}

  Rational value_{0};
  Kind kind_ = Kind::finite;
};

inline const TimeValue& min(const TimeValue& a, const TimeValue& b) { return b < a ? b : a; }
inline const TimeValue& max(const TimeValue& a, const TimeValue& b) { return a < b ? b : a; }

/// Closed interval [lo, hi] with lo <= hi. Constructing an empty interval
/// throws std::invalid_argument; use Interval::checked when emptiness is a
/// legitimate outcome.
class Interval {
public:
  Interval(TimeValue lo, TimeValue hi);

  static std::optional<Interval> checked(TimeValue lo, TimeValue hi);
  static Interval point(const TimeValue& t) { return {t, t}; }

  const TimeValue& lo() const { return lo_; }
  const TimeValue& hi() const { return hi_; }

  bool contains(const TimeValue& t) const { return lo_ <= t && t <= hi_; }
  bool subset_of(const Interval& other) const { return other.lo_ <= lo_ && hi_ <= other.hi_; }
  bool intersects(const Interval& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }
  std::optional<Interval> intersect(const Interval& other) const {
    return checked(max(lo_, other.lo_), min(hi_, other.hi_));
  }
  Interval shifted(const TimeValue& by) const { return {lo_ + by, hi_ + by}; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Interval& iv) {
    return os << '[' << iv.lo_ << ", " << iv.hi_ << ']';
  }

private:
  TimeValue lo_;
  TimeValue hi_;
};

}  // namespace rtdc
