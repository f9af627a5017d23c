#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace renyi {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

double to_double(const Rat& r);

// Exact conversion; every finite double is a dyadic rational.
Rat rat_from_double(double v);

Rat rat(std::int64_t num, std::int64_t den = 1);

// "p" or "p/q", canonical (gcd-reduced, positive denominator).
std::string rat_to_string(const Rat& r);
Rat rat_parse(std::string_view s);

}  // namespace renyi
