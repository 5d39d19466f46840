#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace sia {

/// Exact rational used for overhead coefficients and effective capacity
/// consumption. Integers are rationals with denominator one.
using Rational = boost::rational<std::int64_t>;

// boost::rational's mixed-type operator== recurses forever under C++20
// rewritten comparisons. Compare against Rational(n) instead.
bool operator==(const Rational&, int) = delete;
bool operator==(int, const Rational&) = delete;
bool operator==(const Rational&, long) = delete;
bool operator==(long, const Rational&) = delete;
bool operator==(const Rational&, long long) = delete;
bool operator==(long long, const Rational&) = delete;

/// Parses "p/q", "p", or a plain decimal such as "0.25" (interpreted
/// exactly as 25/100). Throws std::invalid_argument on malformed text or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// Exact value of the shortest decimal that round-trips to `value`, so a
/// JSON number written as 0.1 becomes 1/10 rather than its binary
/// approximation.
Rational rational_from_double(double value);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

/// Largest integer n with n * factor <= budget. factor must be positive.
std::int64_t units_that_fit(const Rational& budget, const Rational& factor);

}  // namespace sia
