#include "renyi/measure.hpp"

#include <cmath>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

// Neumaier-compensated accumulator; keeps grid sums additive to ~1e-16
// relative regardless of evaluation order.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

Measure Measure::atoms(GroundSpace space, std::vector<ExtendedMass> point_masses) {
  if (!space.pure_finite())
    throw ResolutionError("atom storage requires a pure finite space");
  if (static_cast<std::int64_t>(point_masses.size()) != space.n_cells())
    throw ResolutionError("point mass count does not match the space");
  Measure m;
  m.space_ = std::move(space);
  m.atom_mode_ = true;
  m.atoms_ = std::move(point_masses);
  return m;
}

Measure Measure::from_values(GroundSpace space, std::vector<double> values,
                             std::vector<std::uint8_t> inf) {
  if (static_cast<std::int64_t>(values.size()) != space.n_cells())
    throw ResolutionError("value count does not match the space");
  if (inf.empty()) inf.assign(values.size(), 0);
  if (inf.size() != values.size()) throw ResolutionError("inf flag count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    double& v = values[i];
    if (std::isinf(v)) {
      inf[i] = 1;
      v = 0.0;
    }
    if (inf[i]) v = 0.0;
    if (std::isnan(v) || v < 0) throw MassArithmeticError("density values must be >= 0");
  }
  Measure m;
  m.space_ = std::move(space);
  m.values_ = std::move(values);
  m.inf_ = std::move(inf);
  return m;
}

Measure Measure::from_density(GroundSpace space, DensityFn f) {
  std::vector<double> values(static_cast<std::size_t>(space.n_cells()));
  std::vector<double> coords(static_cast<std::size_t>(space.dims()));
  for (std::int64_t c = 0; c < space.n_cells(); ++c) {
    space.cell_center_into(c, coords);
    values[static_cast<std::size_t>(c)] = f(coords);
  }
  Measure m = from_values(std::move(space), std::move(values));
  m.eval_ = std::move(f);
  return m;
}

bool Measure::all_exact() const {
  if (!atom_mode_) return false;
  for (const auto& a : atoms_)
    if (!a.is_exact() && !a.is_infinite()) return false;
  return true;
}

double Measure::value(std::int64_t cell) const {
  if (atom_mode_) {
    const auto& a = atoms_[static_cast<std::size_t>(cell)];
    return a.is_infinite() ? HUGE_VAL : a.as_double();
  }
  return inf_[static_cast<std::size_t>(cell)] ? HUGE_VAL : values_[static_cast<std::size_t>(cell)];
}

bool Measure::inf(std::int64_t cell) const {
  if (atom_mode_) return atoms_[static_cast<std::size_t>(cell)].is_infinite();
  return inf_[static_cast<std::size_t>(cell)] != 0;
}

const ExtendedMass& Measure::atom(std::int64_t cell) const {
  if (!atom_mode_) throw ResolutionError("atom access on a grid measure");
  return atoms_[static_cast<std::size_t>(cell)];
}

ExtendedMass Measure::cell_mass(std::int64_t cell) const {
  if (atom_mode_) return atoms_[static_cast<std::size_t>(cell)];
  if (inf_[static_cast<std::size_t>(cell)]) return ExtendedMass::infinity();
  return ExtendedMass(values_[static_cast<std::size_t>(cell)] * space_.cell_volume(cell));
}

ExtendedMass Measure::mass(const CellSet& cells) const {
  if (cells.size() != space_.n_cells())
    throw ResolutionError("cell set does not resolve in this measure's space");
  if (atom_mode_) {
    ExtendedMass total(Rat(0));
    cells.for_each([&](std::int64_t i) { total += atoms_[static_cast<std::size_t>(i)]; });
    return total;
  }
  bool hit_inf = false;
  CompensatedSum acc;
  cells.for_each([&](std::int64_t i) {
    if (inf_[static_cast<std::size_t>(i)]) {
      hit_inf = true;
    } else {
      acc.add(values_[static_cast<std::size_t>(i)] * space_.cell_volume(i));
    }
  });
  if (hit_inf) return ExtendedMass::infinity();
  return ExtendedMass(acc.value());
}

ExtendedMass Measure::total_mass() const { return mass(CellSet::all(space_.n_cells())); }

Measure Measure::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c))
    throw MassArithmeticError("measure scaling requires a finite positive constant");
  Measure m = *this;
  if (atom_mode_) {
    for (auto& a : m.atoms_) a = a.scaled(c);
  } else {
    for (auto& v : m.values_) v *= c;
    if (eval_) {
      DensityFn base = eval_;
      m.eval_ = [base, c](std::span<const double> x) { return c * base(x); };
    }
  }
  return m;
}

Measure Measure::scaled(const Rat& c) const {
  if (!(c > 0)) throw MassArithmeticError("measure scaling requires a positive constant");
  Measure m = *this;
  if (atom_mode_) {
    for (auto& a : m.atoms_) a = a.scaled(c);
    return m;
  }
  return scaled(to_double(c));
}

Measure Measure::with_evaluator(DensityFn f) const {
  if (atom_mode_) throw ResolutionError("evaluators attach to grid measures only");
  Measure m = *this;
  m.eval_ = std::move(f);
  return m;
}

Measure Measure::restricted(const CellSet& cells, std::optional<SetSpec> follow) const {
  if (cells.size() != space_.n_cells())
    throw ResolutionError("cell set does not resolve in this measure's space");
  Measure m = *this;
  if (atom_mode_) {
    for (std::int64_t i = 0; i < space_.n_cells(); ++i)
      if (!cells.contains(i)) m.atoms_[static_cast<std::size_t>(i)] = ExtendedMass(Rat(0));
    return m;
  }
  for (std::int64_t i = 0; i < space_.n_cells(); ++i) {
    if (!cells.contains(i)) {
      m.values_[static_cast<std::size_t>(i)] = 0.0;
      m.inf_[static_cast<std::size_t>(i)] = 0;
    }
  }
  if (eval_ && follow) {
    DensityFn base = eval_;
    GroundSpace sp = space_;
    SetSpec spec = *follow;
    m.eval_ = [base, sp, spec](std::span<const double> x) {
      return spec_contains(sp, spec, x) ? base(x) : 0.0;
    };
  } else {
    m.eval_ = nullptr;
  }
  return m;
}

std::int64_t Measure::first_positive_cell() const {
  for (std::int64_t i = 0; i < space_.n_cells(); ++i) {
    if (atom_mode_) {
      if (atoms_[static_cast<std::size_t>(i)].finite_positive()) return i;
    } else if (!inf_[static_cast<std::size_t>(i)] && values_[static_cast<std::size_t>(i)] > 0) {
      return i;
    }
  }
  return -1;
}

bool Measure::has_infinite_cell() const {
  for (std::int64_t i = 0; i < space_.n_cells(); ++i)
    if (inf(i)) return true;
  return false;
}

}  // namespace renyi
