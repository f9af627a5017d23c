#include "renyi/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace renyi {

double to_double(const Rat& r) {
  using boost::multiprecision::abs;
  using boost::multiprecision::msb;
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  if (num == 0) return 0.0;
  // Shift both down so neither overflows double range; the quotient keeps
  // far more bits than a double can hold.
  BigInt anum = abs(num);
  const unsigned bn = msb(anum);
  const unsigned bd = msb(den);
  const unsigned top = bn > bd ? bn : bd;
  if (top > 960) {
    const unsigned k = top - 960;
    anum >>= k;
    den >>= k;
    if (den == 0) den = 1;
    double v = anum.convert_to<double>() / den.convert_to<double>();
    return num < 0 ? -v : v;
  }
  double v = anum.convert_to<double>() / den.convert_to<double>();
  return num < 0 ? -v : v;
}

Rat rat_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("rat_from_double: non-finite input");
  if (v == 0.0) return Rat(0);
  int exp = 0;
  double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings turn the mantissa into an integer.
  auto mant_int = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rat r(mant_int);
  if (exp > 0) {
    r *= Rat(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rat(BigInt(1) << -exp);
  }
  return r;
}

Rat rat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_parse(std::string_view s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rat(BigInt(std::string(s)));
    }
    BigInt num{std::string(s.substr(0, slash))};
    BigInt den{std::string(s.substr(slash + 1))};
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("rat_parse: malformed rational '" + std::string(s) + "'");
  }
}

}  // namespace renyi
