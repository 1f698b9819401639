#include "geoinv/scalar.hpp"

#include <charconv>
#include <cstdio>

#include "geoinv/errors.hpp"

namespace geoinv {

ScalarMode parse_mode(std::string_view name)
{
  if (name == "rational") return ScalarMode::Rational;
  if (name == "float") return ScalarMode::Float;
  throw Error("unknown scalar mode '" + std::string(name) + "' (expected rational or float)");
}

std::string_view mode_name(ScalarMode mode)
{
  return mode == ScalarMode::Rational ? "rational" : "float";
}

std::string to_string(const Rational& x)
{
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  return numerator(x).str() + "/" + denominator(x).str();
}

std::string to_string(double x)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

bool all_digits(std::string_view s)
{
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

boost::multiprecision::mpz_int parse_integer(std::string_view s, std::string_view whole)
{
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error("malformed rational '" + std::string(whole) + "'");
  // a leading zero would make GMP read the digits as octal
  while (s.size() > 1 && s[0] == '0') s.remove_prefix(1);
  boost::multiprecision::mpz_int v{std::string(s)};
  return neg ? -v : v;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash), text);
    auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error("rational with zero denominator '" + std::string(text) + "'");
    return Rational(num) / Rational(den);
  }
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = mant.find_first_of("eE"); e != std::string_view::npos) {
    auto ex = mant.substr(e + 1);
    auto [p, ec] = std::from_chars(ex.data() + (ex.size() && ex[0] == '+' ? 1 : 0), ex.data() + ex.size(), exp10);
    if (ec != std::errc() || p != ex.data() + ex.size()) throw Error("malformed number '" + std::string(text) + "'");
    mant = mant.substr(0, e);
  }
  std::string digits(mant);
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  Rational r(parse_integer(digits, text));
  if (exp10 > 400 || exp10 < -400) throw Error("exponent out of range in '" + std::string(text) + "'");
  Rational scale = boost::multiprecision::pow(boost::multiprecision::mpz_int(10), static_cast<unsigned>(std::abs(exp10)));
  return exp10 >= 0 ? r * scale : r / scale;
}

}  // namespace geoinv
