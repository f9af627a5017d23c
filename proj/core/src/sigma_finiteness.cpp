#include "renyi/sigma_finiteness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "renyi/errors.hpp"
#include "renyi/law.hpp"

namespace renyi {

void ExtensionProtocol::validate() const {
  if (steps < 3) throw ConfigError("extension protocol needs >= 3 steps");
  if (!(trend_cutoff > decay_cutoff)) throw ConfigError("trend cutoff must exceed decay cutoff");
  if (!(tail_tol > 0)) throw ConfigError("tail tolerance must be positive");
  if (shell_cells < 4) throw ConfigError("extension shells need >= 4 cells");
  if (max_auto_steps < steps) throw ConfigError("auto-step budget below scheduled steps");
}

std::string to_string(Finiteness f) {
  switch (f) {
    case Finiteness::finite: return "finite";
    case Finiteness::sigma_finite: return "sigma-finite";
    case Finiteness::divergent_evidence: return "divergent-evidence";
    case Finiteness::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<TraceStep> GrowthTrace::for_end(int axis, bool low_end) const {
  std::vector<TraceStep> out;
  for (const auto& s : steps)
    if (s.axis == axis && s.low_end == low_end) out.push_back(s);
  return out;
}

TraceClass classify_increments(const std::vector<double>& inc, double total,
                               const ExtensionProtocol& p) {
  if (static_cast<int>(inc.size()) < p.steps) return TraceClass::inconclusive;
  const double floor = p.tail_tol * std::max(total, 1e-300);
  const std::size_t n = inc.size();
  if (inc[n - 1] <= floor && inc[n - 2] <= floor) return TraceClass::converged;
  // Geometric mean of up to the last three increment ratios.
  double logsum = 0.0;
  int count = 0;
  for (std::size_t j = n - 1; j >= 1 && count < 3; --j, ++count) {
    const double prev = inc[j - 1];
    const double cur = inc[j];
    double r;
    if (prev <= 0.0) {
      r = cur <= 0.0 ? 1e-12 : 2.0 * p.trend_cutoff;
    } else {
      r = cur / prev;
    }
    logsum += std::log(std::max(r, 1e-12));
  }
  const double rbar = std::exp(logsum / std::max(count, 1));
  if (rbar >= p.trend_cutoff) return TraceClass::unbounded;
  if (rbar <= p.decay_cutoff) {
    const double tail = inc[n - 1] * rbar / (1.0 - rbar);
    if (tail <= p.tail_tol * std::max(total, 1e-300)) return TraceClass::converged;
    return TraceClass::inconclusive;  // tail still draining; caller may step further
  }
  return TraceClass::inconclusive;
}

namespace {

// Cell list of one axis: stored boundaries plus appended extension shells.
struct AxisPartition {
  std::vector<double> bounds;  // ascending
  double lo() const { return bounds.front(); }
  double hi() const { return bounds.back(); }

  static AxisPartition from(const GridAxis& g) {
    AxisPartition part;
    part.bounds.reserve(static_cast<std::size_t>(g.cells) + 1);
    for (int k = 0; k <= g.cells; ++k) part.bounds.push_back(g.boundary(k));
    return part;
  }
};

double next_bound_low(const GridAxis& g, double lo) {
  if (g.low.kind == AxisEnd::Kind::open_limit) return g.low.limit + 0.5 * (lo - g.low.limit);
  // unbounded: double away from zero; positive lower bounds approach zero.
  return lo < 0 ? 2.0 * lo : 0.5 * lo;
}

double next_bound_high(const GridAxis& g, double hi) {
  if (g.high.kind == AxisEnd::Kind::open_limit) return g.high.limit - 0.5 * (g.high.limit - hi);
  return hi > 0 ? 2.0 * hi : 0.5 * hi;
}

// Shell [a, b] subdivided for integration; geometric when the axis is
// geometric and the shell stays positive.
std::vector<double> shell_bounds(const GridAxis& g, double a, double b, int cells) {
  std::vector<double> bs(static_cast<std::size_t>(cells) + 1);
  const bool geo = g.spacing == Spacing::geometric && a > 0.0;
  for (int k = 0; k <= cells; ++k) {
    const double t = static_cast<double>(k) / cells;
    bs[static_cast<std::size_t>(k)] = geo ? a * std::pow(b / a, t) : a + t * (b - a);
  }
  return bs;
}

std::vector<double> coarsen(const std::vector<double>& bounds, int max_cells) {
  const int n = static_cast<int>(bounds.size()) - 1;
  if (n <= max_cells) return bounds;
  std::vector<double> out;
  out.push_back(bounds.front());
  for (int k = 1; k < max_cells; ++k) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * n / max_cells));
    out.push_back(bounds[idx]);
  }
  out.push_back(bounds.back());
  return out;
}

struct EndKey {
  int axis;
  bool low;
};

struct EndState {
  EndKey key{};
  std::vector<double> increments;
  TraceClass cls = TraceClass::inconclusive;
  bool decided = false;
  double tail = 0.0;
  int steps_taken = 0;
};

struct Engine {
  const Measure& m;
  const GroundSpace& space;
  const ExtensionProtocol& p;
  std::optional<SetSpec> region;
  std::vector<AxisPartition> parts;  // per axis; finite axes get an empty slot
  std::vector<EndState> ends;
  GrowthTrace trace;
  double total = 0.0;
  bool found_inf = false;
  int step_no = 0;

  Engine(const Measure& measure, std::optional<SetSpec> reg, const ExtensionProtocol& proto)
      : m(measure), space(measure.space()), p(proto), region(std::move(reg)) {
    parts.resize(static_cast<std::size_t>(space.dims()));
    for (int i = 0; i < space.dims(); ++i) {
      if (!space.is_grid_axis(i)) continue;
      const auto& g = space.grid_axis(i);
      parts[static_cast<std::size_t>(i)] = AxisPartition::from(g);
      const bool open_low = !region || region_open(i, true);
      const bool open_high = !region || region_open(i, false);
      if (g.low.extendable() && open_low) ends.push_back({{i, true}, {}, {}, {}, {}, {}});
      if (g.high.extendable() && open_high) ends.push_back({{i, false}, {}, {}, {}, {}, {}});
    }
  }

  bool region_open(int axis, bool low) const {
    const auto& sel = region->axes[static_cast<std::size_t>(axis)];
    if (sel.kind == AxisSel::Kind::all) return true;
    if (sel.kind != AxisSel::Kind::interval) return false;
    return low ? !sel.lo.has_value() : !sel.hi.has_value();
  }

  bool in_region(std::span<const double> coords) const {
    return !region || spec_contains(space, *region, coords);
  }

  void record(int axis, bool low, double before, double after, double inc) {
    total += inc;
    trace.steps.push_back({step_no, axis, low, before, after, inc, total});
  }

  void baseline() {
    ExtendedMass stored =
        region ? m.mass(resolve(space, *region)) : m.total_mass();
    if (stored.is_infinite()) {
      found_inf = true;
      record(-1, false, 0, 0, 0);
      return;
    }
    record(-1, false, 0, 0, stored.as_double());
  }

  // Mass of the slab where axis `key.axis` runs over [a, b] (subdivided) and
  // every other grid axis spans its current partition.
  double slab_mass(const EndKey& key, double a, double b) {
    const auto& g = space.grid_axis(key.axis);
    const auto shell = shell_bounds(g, a, b, p.shell_cells);
    // Per-axis cell decks: {centers, widths}.
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(space.dims()));
    std::vector<std::vector<double>> widths(static_cast<std::size_t>(space.dims()));
    for (int i = 0; i < space.dims(); ++i) {
      auto& cs = centers[static_cast<std::size_t>(i)];
      auto& ws = widths[static_cast<std::size_t>(i)];
      if (!space.is_grid_axis(i)) {
        const int n = space.axis_cells(i);
        for (int k = 0; k < n; ++k) {
          cs.push_back(static_cast<double>(k));
          ws.push_back(1.0);
        }
        continue;
      }
      const auto& bs = i == key.axis
                           ? shell
                           : coarsen(parts[static_cast<std::size_t>(i)].bounds, 96);
      for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
        cs.push_back(0.5 * (bs[k] + bs[k + 1]));
        ws.push_back(bs[k + 1] - bs[k]);
      }
    }
    const auto* eval = m.evaluator();
    std::vector<double> coords(static_cast<std::size_t>(space.dims()));
    std::vector<std::size_t> odo(static_cast<std::size_t>(space.dims()), 0);
    double sum = 0.0;
    while (true) {
      double vol = 1.0;
      for (int i = 0; i < space.dims(); ++i) {
        coords[static_cast<std::size_t>(i)] = centers[static_cast<std::size_t>(i)][odo[static_cast<std::size_t>(i)]];
        vol *= widths[static_cast<std::size_t>(i)][odo[static_cast<std::size_t>(i)]];
      }
      if (in_region(coords)) {
        const double v = (*eval)(coords);
        if (std::isinf(v) || std::isnan(v)) {
          found_inf = true;
          return HUGE_VAL;
        }
        sum += v * vol;
      }
      int i = space.dims() - 1;
      for (; i >= 0; --i) {
        auto& o = odo[static_cast<std::size_t>(i)];
        if (++o < centers[static_cast<std::size_t>(i)].size()) break;
        o = 0;
      }
      if (i < 0) break;
    }
    return sum;
  }

  // One extension move of one end; returns false when the end is exhausted
  // (bound stopped moving, numerically).
  bool extend(EndState& e) {
    auto& part = parts[static_cast<std::size_t>(e.key.axis)];
    const auto& g = space.grid_axis(e.key.axis);
    if (e.key.low) {
      const double before = part.lo();
      const double after = next_bound_low(g, before);
      if (!(after < before)) return false;
      const double inc = slab_mass(e.key, after, before);
      if (found_inf) {
        record(e.key.axis, true, before, after, 0);
        return false;
      }
      auto shell = shell_bounds(g, after, before, p.shell_cells);
      shell.pop_back();  // old lo already present
      part.bounds.insert(part.bounds.begin(), shell.begin(), shell.end());
      e.increments.push_back(inc);
      ++e.steps_taken;
      record(e.key.axis, true, before, after, inc);
      return true;
    }
    const double before = part.hi();
    const double after = next_bound_high(g, before);
    if (!(after > before)) return false;
    const double inc = slab_mass(e.key, before, after);
    if (found_inf) {
      record(e.key.axis, false, before, after, 0);
      return false;
    }
    auto shell = shell_bounds(g, before, after, p.shell_cells);
    part.bounds.insert(part.bounds.end(), shell.begin() + 1, shell.end());
    e.increments.push_back(inc);
    ++e.steps_taken;
    record(e.key.axis, false, before, after, inc);
    return true;
  }

  void decide(EndState& e, bool budget_spent) {
    const auto cls = classify_increments(e.increments, total, p);
    if (cls != TraceClass::inconclusive) {
      e.cls = cls;
      e.decided = true;
      if (cls == TraceClass::converged && !e.increments.empty()) {
        const double last = e.increments.back();
        e.tail = last;  // conservative: one more increment's worth
      }
      return;
    }
    if (budget_spent) {
      e.cls = TraceClass::inconclusive;
      e.decided = true;
    }
  }

  void run() {
    baseline();
    if (found_inf || !m.evaluator() || ends.empty()) return;
    // Scheduled sweep: every end moves once per step.
    for (step_no = 1; step_no <= p.steps && !found_inf; ++step_no) {
      for (auto& e : ends) {
        if (found_inf) break;
        if (!extend(e)) e.decided = true;
      }
    }
    if (found_inf) return;
    for (auto& e : ends) decide(e, false);
    // Drain undecided ends (slow geometric tails) within the budget.
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (auto& e : ends) {
        if (e.decided || found_inf) continue;
        if (e.steps_taken >= p.max_auto_steps) {
          decide(e, true);
          continue;
        }
        ++step_no;
        if (!extend(e)) {
          e.decided = true;
          continue;
        }
        decide(e, false);
        progressed = true;
      }
      if (found_inf) return;
    }
    for (auto& e : ends) {
      if (!e.decided) decide(e, true);
    }
  }

  TraceClass combined() const {
    bool any_unbounded = false;
    bool any_inconclusive = false;
    for (const auto& e : ends) {
      if (e.cls == TraceClass::unbounded) any_unbounded = true;
      if (e.cls == TraceClass::inconclusive) any_inconclusive = true;
    }
    if (any_unbounded) return TraceClass::unbounded;
    if (any_inconclusive) return TraceClass::inconclusive;
    return TraceClass::converged;
  }

  double tails() const {
    double t = 0.0;
    for (const auto& e : ends)
      if (e.cls == TraceClass::converged) t += e.tail;
    return t;
  }

  // Box ladder over the extension steps; element j covers the bounds reached
  // after sweep step j.
  Bunch witness_ladder() const {
    std::vector<BunchElement> elems;
    // Reconstruct per-step bounds from the trace.
    std::vector<double> lo(static_cast<std::size_t>(space.dims()));
    std::vector<double> hi(static_cast<std::size_t>(space.dims()));
    for (int i = 0; i < space.dims(); ++i) {
      if (space.is_grid_axis(i)) {
        lo[static_cast<std::size_t>(i)] = space.grid_axis(i).lo;
        hi[static_cast<std::size_t>(i)] = space.grid_axis(i).hi;
      }
    }
    double running = 0.0;
    int cur_step = 0;
    auto push = [&](int step) {
      if (running <= 0.0 || !std::isfinite(running)) return;
      SetSpec spec = SetSpec::whole(space);
      std::ostringstream note;
      for (int i = 0; i < space.dims(); ++i) {
        if (!space.is_grid_axis(i)) continue;
        spec.interval(i, lo[static_cast<std::size_t>(i)], hi[static_cast<std::size_t>(i)]);
        note << axis_name(space.axis(i)) << ":[" << lo[static_cast<std::size_t>(i)] << ","
             << hi[static_cast<std::size_t>(i)] << "] ";
      }
      note << "(step " << step << ")";
      elems.push_back({spec, ExtendedMass(running), note.str()});
    };
    for (const auto& s : trace.steps) {
      if (s.step != cur_step) {
        push(cur_step);
        cur_step = s.step;
      }
      running = s.total;
      if (s.axis >= 0) {
        if (s.low_end) {
          lo[static_cast<std::size_t>(s.axis)] = s.bound_after;
        } else {
          hi[static_cast<std::size_t>(s.axis)] = s.bound_after;
        }
      }
    }
    push(cur_step);
    // Masses strictly increase along a divergent ladder; drop stalled heads.
    std::vector<BunchElement> chain;
    for (auto& e : elems) {
      if (chain.empty() || chain.back().mass < e.mass) chain.push_back(std::move(e));
    }
    return Bunch::witness(std::move(chain));
  }
};

}  // namespace

ExtendedMassResult mass_with_extension(const Measure& m, const SetSpec& region,
                                       const ExtensionProtocol& p) {
  p.validate();
  ExtendedMassResult out;
  const auto cells = resolve(m.space(), region);
  const auto stored = m.mass(cells);
  if (stored.is_infinite()) {
    out.value = ExtendedMass::infinity();
    out.cls = TraceClass::converged;  // determined: the mass is +inf
    out.trace.note = "stored cells carry infinite mass";
    return out;
  }
  const bool needs_extension = region.unbounded_on(m.space());
  if (!needs_extension) {
    out.value = stored;
    out.cls = TraceClass::converged;
    return out;
  }
  if (!m.evaluator()) {
    out.value = stored;
    out.cls = TraceClass::inconclusive;
    out.trace.note = "no evaluator to extend the truncation";
    return out;
  }
  Engine eng(m, region, p);
  eng.run();
  out.trace = std::move(eng.trace);
  if (eng.found_inf) {
    out.value = ExtendedMass::infinity();
    out.cls = TraceClass::converged;
    out.trace.note = "locally infinite density under extension";
    return out;
  }
  out.cls = eng.combined();
  out.trace.cls = out.cls;
  if (out.cls == TraceClass::unbounded) {
    out.value = ExtendedMass::infinity();
  } else {
    out.value = ExtendedMass(eng.total + eng.tails());
  }
  return out;
}

namespace {

std::vector<std::int64_t> infinite_cell_sample(const Measure& m, std::size_t cap = 16) {
  std::vector<std::int64_t> cells;
  for (std::int64_t i = 0; i < m.space().n_cells() && cells.size() < cap; ++i)
    if (m.inf(i)) cells.push_back(i);
  return cells;
}

// Local-divergence probe: refine the heaviest cells and watch the refined
// mass sequence. A non-integrable interior singularity shows up as sustained
// growth.
std::vector<std::int64_t> refinement_divergent_cells(const Measure& m,
                                                     const ExtensionProtocol& p) {
  if (p.refinement_steps < 3 || !m.evaluator() || m.atom_mode()) return {};
  const auto& space = m.space();
  // Pick up to 8 heaviest cells.
  std::vector<std::pair<double, std::int64_t>> heavy;
  for (std::int64_t i = 0; i < space.n_cells(); ++i)
    heavy.emplace_back(m.value(i) * space.cell_volume(i), i);
  std::sort(heavy.begin(), heavy.end(), std::greater<>());
  if (heavy.size() > 8) heavy.resize(8);

  std::vector<std::int64_t> divergent;
  const auto* eval = m.evaluator();
  for (const auto& [w0, cell] : heavy) {
    (void)w0;
    std::vector<double> masses;
    for (int step = 1; step <= p.refinement_steps; ++step) {
      const int per_axis = 1 << step;
      // Midpoint quadrature of the cell at 2^step subdivisions per grid axis.
      auto multi = space.cell_multi(cell);
      std::vector<int> grid_axes;
      for (int i = 0; i < space.dims(); ++i)
        if (space.is_grid_axis(i)) grid_axes.push_back(i);
      if (grid_axes.empty()) break;
      std::vector<std::size_t> odo(grid_axes.size(), 0);
      std::vector<double> coords(static_cast<std::size_t>(space.dims()));
      space.cell_center_into(cell, coords);
      double sum = 0.0;
      while (true) {
        double vol = 1.0;
        for (std::size_t gi = 0; gi < grid_axes.size(); ++gi) {
          const auto& g = space.grid_axis(grid_axes[gi]);
          const int k = multi[static_cast<std::size_t>(grid_axes[gi])];
          const double a = g.boundary(k);
          const double w = g.width(k) / per_axis;
          coords[static_cast<std::size_t>(grid_axes[gi])] =
              a + (static_cast<double>(odo[gi]) + 0.5) * w;
          vol *= w;
        }
        const double v = (*eval)(coords);
        if (std::isinf(v) || std::isnan(v)) {
          sum = HUGE_VAL;
          break;
        }
        sum += v * vol;
        std::size_t gi = 0;
        for (; gi < grid_axes.size(); ++gi) {
          if (++odo[gi] < static_cast<std::size_t>(per_axis)) break;
          odo[gi] = 0;
        }
        if (gi == grid_axes.size()) break;
      }
      masses.push_back(sum);
      if (std::isinf(sum)) break;
    }
    if (masses.empty()) continue;
    if (std::isinf(masses.back())) {
      divergent.push_back(cell);
      continue;
    }
    bool grows = masses.size() >= 3;
    for (std::size_t j = 1; j < masses.size() && grows; ++j)
      grows = masses[j] >= p.divergence_ratio * masses[j - 1];
    if (grows) divergent.push_back(cell);
  }
  return divergent;
}

}  // namespace

SigmaFinitenessVerdict probe_sigma_finiteness(const Measure& m, const ExtensionProtocol& p) {
  p.validate();
  SigmaFinitenessVerdict v;
  if (m.has_infinite_cell()) {
    v.kind = Finiteness::divergent_evidence;
    v.infinite_cells = infinite_cell_sample(m);
    v.note = "stored cells carry infinite mass";
    return v;
  }
  if (auto cells = refinement_divergent_cells(m, p); !cells.empty()) {
    v.kind = Finiteness::divergent_evidence;
    v.infinite_cells = std::move(cells);
    v.note = "cell mass diverges under refinement";
    return v;
  }
  const bool extendable = m.space().has_extendable_axis();
  if (!extendable) {
    const auto total = m.total_mass();
    if (total.is_zero()) {
      v.kind = Finiteness::inconclusive;
      v.note = "zero total mass";
      return v;
    }
    v.kind = Finiteness::finite;
    v.total = total;
    return v;
  }
  if (!m.evaluator()) {
    v.kind = Finiteness::inconclusive;
    v.note = "extendable truncation but no evaluator to extend";
    return v;
  }
  Engine eng(m, std::nullopt, p);
  eng.run();
  v.trace = std::move(eng.trace);
  if (eng.found_inf) {
    v.kind = Finiteness::divergent_evidence;
    v.note = "locally infinite density under extension";
    v.trace.cls = TraceClass::unbounded;
    return v;
  }
  const auto cls = eng.combined();
  v.trace.cls = cls;
  switch (cls) {
    case TraceClass::converged:
      v.kind = Finiteness::finite;
      v.total = ExtendedMass(eng.total + eng.tails());
      break;
    case TraceClass::unbounded: {
      v.kind = Finiteness::sigma_finite;
      auto ladder = eng.witness_ladder();
      if (ladder.size() >= 2) {
        v.witness = std::move(ladder);
      } else {
        v.kind = Finiteness::inconclusive;
        v.note = "unbounded trend but no usable witness ladder";
      }
      break;
    }
    case TraceClass::inconclusive:
      v.kind = Finiteness::inconclusive;
      v.note = "growth trace neither converges nor establishes an unbounded trend";
      break;
  }
  return v;
}

SigmaFinitenessVerdict probe_sigma_finiteness(const Law& law, const ExtensionProtocol& p) {
  return probe_sigma_finiteness(law.rep(), p);
}

}  // namespace renyi
