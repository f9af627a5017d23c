#pragma once

#include <optional>
#include <string>
#include <vector>

#include "renyi/bunch.hpp"
#include "renyi/extended_mass.hpp"
#include "renyi/measure.hpp"

namespace renyi {

class Law;

// Doubling extension schedule: each step moves every extendable truncation
// bound once (unbounded ends double, open limits halve the remaining gap) and
// classifies the resulting mass increments.
struct ExtensionProtocol {
  int steps = 6;                  // scheduled steps, >= 3
  double divergence_ratio = 1.5;  // total-mass growth per doubling flagged as divergent trend
  double trend_cutoff = 0.9;      // increment ratio >= this: unbounded
  double decay_cutoff = 0.75;     // increment ratio <= this: geometric tail
  double tail_tol = 1e-9;         // relative tail size treated as converged
  int shell_cells = 32;           // subdivision of each extension shell
  int max_auto_steps = 48;        // extra budget while a geometric tail drains
  int refinement_steps = 0;       // optional local-divergence probe per cell

  void validate() const;
};

enum class TraceClass { converged, unbounded, inconclusive };

struct TraceStep {
  int step = 0;
  int axis = -1;       // -1: stored truncation baseline
  bool low_end = false;
  double bound_before = 0.0;
  double bound_after = 0.0;
  double increment = 0.0;  // canonical-gauge mass added by this move
  double total = 0.0;      // running total after the move
};

struct GrowthTrace {
  std::vector<TraceStep> steps;
  TraceClass cls = TraceClass::converged;
  std::string note;

  // Steps that moved a specific axis end, in order.
  std::vector<TraceStep> for_end(int axis, bool low_end) const;
  double last_total() const { return steps.empty() ? 0.0 : steps.back().total; }
};

enum class Finiteness { finite, sigma_finite, divergent_evidence, inconclusive };

std::string to_string(Finiteness f);

struct SigmaFinitenessVerdict {
  Finiteness kind = Finiteness::inconclusive;
  ExtendedMass total;                   // finite: converged total (incl. tail estimate)
  std::optional<Bunch> witness;         // sigma_finite: truncation ladder
  GrowthTrace trace;
  std::vector<std::int64_t> infinite_cells;  // divergent evidence: offending cells (sample)
  std::string note;

  bool is_sigma_finite_or_finite() const {
    return kind == Finiteness::finite || kind == Finiteness::sigma_finite;
  }
};

// Classifies an increment sequence against the protocol cutoffs.
TraceClass classify_increments(const std::vector<double>& increments, double total,
                               const ExtensionProtocol& p);

// Mass of a region with truncation extension along every axis end that is
// both extendable and left open by the descriptor. Needs the measure's
// evaluator to look past the stored truncation; without one the stored mass
// is returned with an inconclusive class when extension would be required.
struct ExtendedMassResult {
  ExtendedMass value;  // converged: stored + shells + tail estimate
  TraceClass cls = TraceClass::converged;
  GrowthTrace trace;
};
ExtendedMassResult mass_with_extension(const Measure& m, const SetSpec& region,
                                       const ExtensionProtocol& p = {});

// Finite / SigmaFinite / DivergentEvidence / Inconclusive classification.
// Infinite cells (stored or produced by marginalization) are divergent
// evidence: the mass is locally infinite. Unbounded totals with finite pieces
// yield SigmaFinite with the truncation ladder as witness.
SigmaFinitenessVerdict probe_sigma_finiteness(const Measure& m, const ExtensionProtocol& p = {});
SigmaFinitenessVerdict probe_sigma_finiteness(const Law& law, const ExtensionProtocol& p = {});

}  // namespace renyi
