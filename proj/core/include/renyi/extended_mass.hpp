#pragma once

#include <variant>

#include "renyi/rational.hpp"

namespace renyi {

// A mass value in [0, +inf]. +inf is absorbing under addition and under
// multiplication by positive scalars; 0 * inf is rejected, never silently 0.
// Finite values carry either an exact rational payload (finite spaces) or a
// double (grids). Exactness propagates through arithmetic when both operands
// are exact.
class ExtendedMass {
 public:
  ExtendedMass() : v_(Rat(0)) {}
  ExtendedMass(double v);       // NOLINT: implicit by design
  ExtendedMass(Rat v);          // NOLINT
  static ExtendedMass infinity();

  bool is_infinite() const { return std::holds_alternative<Inf>(v_); }
  bool is_exact() const { return std::holds_alternative<Rat>(v_); }
  bool is_zero() const;
  bool finite_positive() const;

  // +inf maps to HUGE_VAL.
  double as_double() const;
  const Rat& exact() const;  // requires is_exact()

  ExtendedMass& operator+=(const ExtendedMass& o);
  friend ExtendedMass operator+(ExtendedMass a, const ExtendedMass& b) {
    a += b;
    return a;
  }

  // Scalar must be >= 0; scaling +inf by 0 throws MassArithmeticError,
  // scaling by a negative scalar likewise.
  ExtendedMass scaled(double c) const;
  ExtendedMass scaled(const Rat& c) const;

  friend ExtendedMass operator*(const ExtendedMass& a, const ExtendedMass& b);

  friend bool operator==(const ExtendedMass& a, const ExtendedMass& b);
  friend bool operator!=(const ExtendedMass& a, const ExtendedMass& b) { return !(a == b); }
  friend bool operator<(const ExtendedMass& a, const ExtendedMass& b);

 private:
  struct Inf {};
  std::variant<double, Rat, Inf> v_;
};

}  // namespace renyi
