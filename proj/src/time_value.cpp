#include "rtdc/time_value.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace rtdc {

namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size())
    throw std::invalid_argument("malformed time value '" + std::string(whole) + "'");
  return v;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Smallest k with 10^k divisible by den, if den has no prime factor other than 2 and 5.
std::optional<int> decimal_exponent(std::int64_t den) {
  std::int64_t pow10 = 1;
  for (int k = 0; k <= 18; ++k) {
    if (pow10 % den == 0) return k;
    pow10 *= 10;
  }
  return std::nullopt;
}

std::string decimal_text(const TimeValue::Rational& r, int k, int min_digits) {
  std::int64_t pow10 = 1;
  for (int i = 0; i < k; ++i) pow10 *= 10;
  const std::int64_t scaled = r.numerator() * (pow10 / r.denominator());
  const bool negative = scaled < 0;
  std::string digits = std::to_string(negative ? -scaled : scaled);
  int frac = k;
  // Trim trailing zeros beyond the requested precision.
  while (frac > min_digits && digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    --frac;
  }
  while (frac < min_digits) {
    digits.push_back('0');
    ++frac;
  }
  if (static_cast<int>(digits.size()) <= frac) digits.insert(0, frac - digits.size() + 1, '0');
  std::string out = negative ? "-" : "";
  out += digits.substr(0, digits.size() - frac);
  if (frac > 0) out += "." + digits.substr(digits.size() - frac);
  return out;
}

}  // namespace

TimeValue TimeValue::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s == "inf" || s == "+inf" || s == "infinity") return infinity();
  if (s == "-inf" || s == "-infinity") return neg_infinity();

  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw std::invalid_argument("malformed time value '" + std::string(text) + "'");
    const auto d = parse_int(den, text);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(parse_int(num, text), d);
  } else {
    auto dot = s.find('.');
    auto int_part = s.substr(0, dot);
    auto frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("malformed time value '" + std::string(text) + "'");
    if ((!int_part.empty() && !all_digits(int_part)) || (dot != std::string_view::npos && !all_digits(frac_part)))
      throw std::invalid_argument("malformed time value '" + std::string(text) + "'");
    if (frac_part.size() > 15) throw std::invalid_argument("too many decimal digits in '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    value = Rational(whole * den + frac, den);
  }
  return TimeValue(negative ? -value : value);
}

double TimeValue::to_double() const {
  switch (kind_) {
    case Kind::pos_inf: return std::numeric_limits<double>::infinity();
    case Kind::neg_inf: return -std::numeric_limits<double>::infinity();
    case Kind::finite: break;
  }
  return boost::rational_cast<double>(value_);
}

std::string TimeValue::to_string() const { return to_fixed(0); }

std::string TimeValue::to_fixed(int min_digits) const {
  if (kind_ == Kind::pos_inf) return "inf";
  if (kind_ == Kind::neg_inf) return "-inf";
  if (auto k = decimal_exponent(value_.denominator())) return decimal_text(value_, *k, min_digits);
  return std::to_string(value_.numerator()) + "/" + std::to_string(value_.denominator());
}

TimeValue TimeValue::operator-() const {
  switch (kind_) {
    case Kind::pos_inf: return neg_infinity();
    case Kind::neg_inf: return infinity();
    case Kind::finite: break;
  }
  return TimeValue(-value_);
}

TimeValue& TimeValue::operator+=(const TimeValue& rhs) {
  if (kind_ == Kind::finite && rhs.kind_ == Kind::finite) {
    value_ += rhs.value_;
    return *this;
  }
  if (kind_ != Kind::finite && rhs.kind_ != Kind::finite && kind_ != rhs.kind_)
    throw std::domain_error("inf - inf is undefined");
  if (kind_ == Kind::finite) {
    kind_ = rhs.kind_;
    value_ = 0;
  }
  return *this;
}

std::strong_ordering operator<=>(const TimeValue& a, const TimeValue& b) {
  auto rank = [](const TimeValue& t) {
    return t.kind_ == TimeValue::Kind::neg_inf ? 0 : t.kind_ == TimeValue::Kind::finite ? 1 : 2;
  };
  if (auto c = rank(a) <=> rank(b); c != 0) return c;
  if (a.kind_ != TimeValue::Kind::finite) return std::strong_ordering::equal;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Interval::Interval(TimeValue lo, TimeValue hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw std::invalid_argument("empty interval [" + lo_.to_string() + ", " + hi_.to_string() + "]");
}

std::optional<Interval> Interval::checked(TimeValue lo, TimeValue hi) {
  if (hi < lo) return std::nullopt;
  return Interval(std::move(lo), std::move(hi));
}

}  // namespace rtdc
