#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace fjq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact C(n, r); zero when r < 0 or r > n.
BigInt binomial(int n, int r);

/// Correctly rounded (round-to-nearest) conversion of an exact rational.
/// Works for numerators and denominators far beyond the double range.
double to_double(const Rational& q);
double to_double(const BigInt& z);

/// Round to `digits` significant decimal digits, the way a coefficient
/// exported as text with printf("%.*g") and read back would be.
double round_significant(double x, int digits);

/// Parses "0.1", "-2.5e-3", "3", "1/3" into an exact rational.
/// Throws DomainError on anything else.
Rational parse_rational(std::string_view text);

/// "5/6", "-3", "0".
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Shortest decimal that reads back to the same double ("%.17g" fallback).
std::string format_double(double x);

}  // namespace fjq
