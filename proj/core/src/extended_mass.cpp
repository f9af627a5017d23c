#include "renyi/extended_mass.hpp"

#include <cmath>

#include "renyi/errors.hpp"

namespace renyi {

ExtendedMass::ExtendedMass(double v) : v_(v) {
  if (std::isnan(v) || v < 0) throw MassArithmeticError("mass must be a nonnegative real");
  if (std::isinf(v)) v_ = Inf{};
}

ExtendedMass::ExtendedMass(Rat v) : v_(std::move(v)) {
  if (std::get<Rat>(v_) < 0) throw MassArithmeticError("mass must be a nonnegative rational");
}

ExtendedMass ExtendedMass::infinity() {
  ExtendedMass m;
  m.v_ = Inf{};
  return m;
}

bool ExtendedMass::is_zero() const {
  if (is_infinite()) return false;
  if (is_exact()) return std::get<Rat>(v_) == 0;
  return std::get<double>(v_) == 0.0;
}

bool ExtendedMass::finite_positive() const { return !is_infinite() && !is_zero(); }

double ExtendedMass::as_double() const {
  if (is_infinite()) return HUGE_VAL;
  if (is_exact()) return to_double(std::get<Rat>(v_));
  return std::get<double>(v_);
}

const Rat& ExtendedMass::exact() const {
  if (!is_exact()) throw MassArithmeticError("mass has no exact rational payload");
  return std::get<Rat>(v_);
}

ExtendedMass& ExtendedMass::operator+=(const ExtendedMass& o) {
  if (is_infinite() || o.is_infinite()) {
    v_ = Inf{};
    return *this;
  }
  if (is_exact() && o.is_exact()) {
    v_ = std::get<Rat>(v_) + std::get<Rat>(o.v_);
    return *this;
  }
  v_ = as_double() + o.as_double();
  return *this;
}

ExtendedMass ExtendedMass::scaled(double c) const {
  if (std::isnan(c) || c < 0) throw MassArithmeticError("mass scalar must be nonnegative");
  if (is_infinite()) {
    if (c == 0.0) throw MassArithmeticError("0 * infinity is undefined");
    return infinity();
  }
  if (c == 0.0) return ExtendedMass(Rat(0));
  if (is_exact()) return ExtendedMass(as_double() * c);
  return ExtendedMass(std::get<double>(v_) * c);
}

ExtendedMass ExtendedMass::scaled(const Rat& c) const {
  if (c < 0) throw MassArithmeticError("mass scalar must be nonnegative");
  if (is_infinite()) {
    if (c == 0) throw MassArithmeticError("0 * infinity is undefined");
    return infinity();
  }
  if (c == 0) return ExtendedMass(Rat(0));
  if (is_exact()) return ExtendedMass(Rat(std::get<Rat>(v_) * c));
  return ExtendedMass(std::get<double>(v_) * to_double(c));
}

ExtendedMass operator*(const ExtendedMass& a, const ExtendedMass& b) {
  if (a.is_infinite()) {
    if (b.is_zero()) throw MassArithmeticError("0 * infinity is undefined");
    return ExtendedMass::infinity();
  }
  if (b.is_infinite()) {
    if (a.is_zero()) throw MassArithmeticError("0 * infinity is undefined");
    return ExtendedMass::infinity();
  }
  if (a.is_exact() && b.is_exact()) return ExtendedMass(Rat(a.exact() * b.exact()));
  return ExtendedMass(a.as_double() * b.as_double());
}

bool operator==(const ExtendedMass& a, const ExtendedMass& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return a.as_double() == b.as_double();
}

bool operator<(const ExtendedMass& a, const ExtendedMass& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
  return a.as_double() < b.as_double();
}

}  // namespace renyi
