#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace chainline {

// Exact rational arithmetic for the verification paths. Optimization paths
// (tube minimization) use plain doubles instead.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double value);

// Parses "p" or "p/q" with optional sign.
Rational parse_rational(const std::string& text);

// Emits "p" or "p/q".
std::string format_rational(const Rational& value);

// 2^exponent as an exact rational; exponent may be negative.
Rational pow2(int exponent);

}  // namespace chainline
