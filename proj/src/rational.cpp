#include "chainline/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace chainline {

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("rational_from_double: value must be finite");
  }
  if (value == 0.0) return Rational(0);
  int exp = 0;
  const double mantissa = std::frexp(value, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational result(scaled);
  const int shift = exp - 53;
  if (shift >= 0) {
    result *= pow2(shift);
  } else {
    result /= pow2(-shift);
  }
  return result;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(BigInt(text));
  }
  const BigInt num(text.substr(0, slash));
  const BigInt den(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational pow2(int exponent) {
  BigInt p = BigInt(1) << static_cast<unsigned>(exponent >= 0 ? exponent : -exponent);
  return exponent >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

}  // namespace chainline
