#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "renyi/extended_mass.hpp"
#include "renyi/space.hpp"

namespace renyi {

// Density evaluator. Coordinates follow the axis order of the space: grid
// axes take real coordinates, finite axes the label index. Returning
// +infinity marks a cell as carrying infinite mass.
using DensityFn = std::function<double(std::span<const double>)>;
using CoordPred = std::function<bool(std::span<const double>)>;

// A measure at the resolution of the cell partition. Two storage modes:
//  - atom mode (pure finite spaces): one ExtendedMass per point; exact when
//    all entries carry rational payloads.
//  - grid mode: per-cell density values at cell centers plus +inf flags, and
//    optionally the evaluator the values were sampled from. The evaluator is
//    what allows following the measure past the stored truncation.
class Measure {
 public:
  static Measure atoms(GroundSpace space, std::vector<ExtendedMass> point_masses);
  static Measure from_values(GroundSpace space, std::vector<double> values,
                             std::vector<std::uint8_t> inf = {});
  static Measure from_density(GroundSpace space, DensityFn f);

  const GroundSpace& space() const { return space_; }
  bool atom_mode() const { return atom_mode_; }
  bool all_exact() const;

  // Density at the cell center (atom mode: the point mass; volumes are 1).
  double value(std::int64_t cell) const;
  bool inf(std::int64_t cell) const;
  const ExtendedMass& atom(std::int64_t cell) const;
  const DensityFn* evaluator() const { return eval_ ? &eval_ : nullptr; }

  ExtendedMass cell_mass(std::int64_t cell) const;
  ExtendedMass mass(const CellSet& cells) const;
  ExtendedMass total_mass() const;

  Measure scaled(double c) const;
  Measure scaled(const Rat& c) const;
  // Same stored values with an evaluator attached (grid mode only).
  Measure with_evaluator(DensityFn f) const;
  // Zero outside `cells`; when `follow` is given the evaluator keeps tracking
  // the restriction outside the stored truncation.
  Measure restricted(const CellSet& cells, std::optional<SetSpec> follow = {}) const;

  // First cell (in cell order) with finite positive mass, -1 if none.
  std::int64_t first_positive_cell() const;
  bool has_infinite_cell() const;

 private:
  Measure() = default;

  GroundSpace space_{std::vector<Axis>{FiniteAxis{"x", {"_"}}}};
  bool atom_mode_ = false;
  std::vector<ExtendedMass> atoms_;
  std::vector<double> values_;
  std::vector<std::uint8_t> inf_;
  DensityFn eval_;
};

}  // namespace renyi
