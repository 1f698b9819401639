#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace geoinv {

/// Exact rational scalar. Expression templates are off so `auto` and Eigen
/// storage behave like a plain value type.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class ScalarMode { Rational, Float };

ScalarMode parse_mode(std::string_view name);
std::string_view mode_name(ScalarMode mode);

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

template <typename Scalar>
inline constexpr ScalarMode mode_of_v = is_exact_v<Scalar> ? ScalarMode::Rational : ScalarMode::Float;

/// num/den as a Scalar; exact for Rational.
template <typename Scalar>
Scalar fraction(std::int64_t num, std::int64_t den = 1)
{
  if (den == 0) throw std::domain_error("fraction with zero denominator");
  if constexpr (is_exact_v<Scalar>) {
    return Rational(num) / Rational(den);
  } else {
    return static_cast<Scalar>(num) / static_cast<Scalar>(den);
  }
}

template <typename Scalar>
double to_double(const Scalar& x)
{
  if constexpr (is_exact_v<Scalar>) {
    return x.template convert_to<double>();
  } else {
    return static_cast<double>(x);
  }
}

template <typename Scalar>
Scalar abs_value(const Scalar& x)
{
  if constexpr (is_exact_v<Scalar>) {
    return boost::multiprecision::abs(x);
  } else {
    return std::abs(x);
  }
}

template <typename Scalar>
bool is_zero(const Scalar& x)
{
  return x == Scalar(0);
}

/// "num/den" for rationals, shortest round-trip decimal for doubles.
std::string to_string(const Rational& x);
std::string to_string(double x);

/// Parses "num/den", an integer, or a decimal literal. Decimals convert exactly.
Rational parse_rational(std::string_view text);

}  // namespace geoinv
