#pragma once

#include <optional>
#include <string>

#include "renyi/measure.hpp"

namespace renyi {

struct ExtensionProtocol;

// An equivalence class of measures under positive scaling. The stored
// representative is kept exactly as constructed; the canonical representative
// is the member whose mass on the calibration set is 1. Operations that
// produce laws return them in canonical form. Laws whose representative has
// no finite-positive describable set (e.g. every cell infinite) are stored
// uncalibrated; positive scaling does not move them anyway.
class Law {
 public:
  static Law from_measure(Measure m, std::optional<SetSpec> calibration = {});
  static Law from_density(GroundSpace space, DensityFn f,
                          std::optional<SetSpec> calibration = {});
  static Law from_atoms(GroundSpace space, std::vector<ExtendedMass> masses,
                        std::optional<SetSpec> calibration = {});

  const Measure& rep() const { return rep_; }
  const GroundSpace& space() const { return rep_.space(); }
  const std::optional<SetSpec>& calibration() const { return calib_; }

  Measure canonical_rep() const;
  // canonical representative = canonical_scale * rep
  double canonical_scale() const { return canonical_scale_; }
  const std::optional<Rat>& exact_canonical_scale() const { return exact_canonical_scale_; }
  bool is_canonical() const;

  // Factor by which the stored representative differs from the source
  // densities the law was built from, composed through operations. Reports
  // divide by it to quote masses in the caller's gauge.
  double gauge() const { return gauge_; }
  const std::optional<Rat>& exact_gauge() const { return exact_gauge_; }

  ExtendedMass mass(const CellSet& cells) const { return rep_.mass(cells); }
  ExtendedMass mass(const SetSpec& spec) const { return rep_.mass(resolve(space(), spec)); }

 private:
  friend Law make_canonical_law(Measure raw, std::optional<SetSpec> calibration,
                                double parent_gauge, const std::optional<Rat>& parent_exact_gauge);
  Law() = default;

  Measure rep_ = Measure::atoms(GroundSpace::finite({"_"}), {ExtendedMass(Rat(1))});
  std::optional<SetSpec> calib_;
  double canonical_scale_ = 1.0;
  std::optional<Rat> exact_canonical_scale_;
  double gauge_ = 1.0;
  std::optional<Rat> exact_gauge_;
};

// Canonicalizes `raw` against `calibration` (or a deterministic default: the
// whole space when its mass is finite positive, else the first
// finite-positive cell) and composes the applied scale onto the parent gauge.
// Every law-producing operation goes through here.
Law make_canonical_law(Measure raw, std::optional<SetSpec> calibration, double parent_gauge = 1.0,
                       const std::optional<Rat>& parent_exact_gauge = std::optional<Rat>(Rat(1)));

struct ProportionalityReport {
  bool proportional = false;
  double constant = 0.0;     // L1 density ~= constant * L2 density
  double spread = HUGE_VAL;  // max/min density ratio over the compared cells
  bool exact = false;        // decided in rational arithmetic
  std::optional<Rat> exact_constant;
  std::int64_t cells_compared = 0;
  std::string note;
};

// Ratio test over the common positive-density region of the stored
// representatives (density floor 1e-300). Cells where both laws are infinite
// are consistent and skipped; an infinite cell facing a finite one fails.
// Disjoint supports raise IncomparableError.
ProportionalityReport proportional(const Law& a, const Law& b, double tol = 1e-9);

// Probability law obtained by conditioning on an event of finite positive
// mass. Events unbounded along extendable axes are first classified by the
// extension protocol; an unbounded mass raises NonNormalizableError, a zero
// mass NullEventError.
Law condition_on_event(const Law& law, const SetSpec& event);
Law condition_on_event(const Law& law, const SetSpec& event, const ExtensionProtocol& protocol);

// Box around one cell, expressible as a SetSpec.
SetSpec cell_box_spec(const GroundSpace& space, std::int64_t cell);

}  // namespace renyi
