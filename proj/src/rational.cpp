#include "sia/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace sia {
namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

std::int64_t pow10(int exponent) {
  std::int64_t p = 1;
  for (int e = 0; e < exponent; ++e) {
    if (p > std::numeric_limits<std::int64_t>::max() / 10) {
      throw std::invalid_argument("decimal has too many digits");
    }
    p *= 10;
  }
  return p;
}

// Decimal text without exponent, e.g. "-0.125".
Rational parse_decimal(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, whole));
  std::string digits(text.substr(0, dot));
  const std::string_view fraction = text.substr(dot + 1);
  if (fraction.empty() || fraction.find_first_not_of("0123456789") != std::string_view::npos) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  digits += fraction;
  return Rational(parse_int(digits, whole), pow10(static_cast<int>(fraction.size())));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    const auto e = text.find_first_of("eE");
    if (e == std::string_view::npos) return parse_decimal(text, whole);
    Rational mantissa = parse_decimal(text.substr(0, e), whole);
    auto exponent_text = text.substr(e + 1);
    if (!exponent_text.empty() && exponent_text.front() == '+') exponent_text.remove_prefix(1);
    const auto exponent = parse_int(exponent_text, whole);
    if (exponent >= 0) return mantissa * Rational(pow10(static_cast<int>(exponent)));
    return mantissa / Rational(pow10(static_cast<int>(-exponent)));
  }
  const auto num = parse_int(trim(text.substr(0, slash)), whole);
  const auto den = parse_int(trim(text.substr(slash + 1)), whole);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
  return Rational(num, den);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite overhead value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::invalid_argument("cannot format number");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t units_that_fit(const Rational& budget, const Rational& factor) {
  if (budget <= 0) return 0;
  const Rational q = budget / factor;
  return q.numerator() / q.denominator();
}

}  // namespace sia
