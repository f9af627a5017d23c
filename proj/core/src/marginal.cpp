#include "renyi/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "renyi/errors.hpp"
#include "renyi/quadrature.hpp"

namespace renyi {

namespace {

struct FiberSetup {
  GroundSpace space;          // joint space
  std::vector<int> kept;
  std::vector<int> dropped;
  ExtensionProtocol protocol;
  bool extend = true;
};

struct FiberValue {
  double value = 0.0;
  bool infinite = false;
  bool inconclusive = false;
};

std::vector<double> coarsen_bounds(const std::vector<double>& bounds, int max_cells) {
  const int n = static_cast<int>(bounds.size()) - 1;
  if (n <= max_cells) return bounds;
  std::vector<double> out;
  out.push_back(bounds.front());
  for (int k = 1; k < max_cells; ++k)
    out.push_back(bounds[static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * n / max_cells))]);
  out.push_back(bounds.back());
  return out;
}

// Midpoint sum of the joint evaluator over the dropped axes at pinned kept
// coordinates, using the given dropped-axis partitions.
double dropped_sum(const FiberSetup& fs, const DensityFn& eval,
                   std::span<const double> kept_coords,
                   const std::vector<std::vector<double>>& parts, bool& infinite) {
  const int nd = static_cast<int>(fs.dropped.size());
  std::vector<std::vector<double>> centers(static_cast<std::size_t>(nd));
  std::vector<std::vector<double>> widths(static_cast<std::size_t>(nd));
  for (int d = 0; d < nd; ++d) {
    const int axis = fs.dropped[static_cast<std::size_t>(d)];
    auto& cs = centers[static_cast<std::size_t>(d)];
    auto& ws = widths[static_cast<std::size_t>(d)];
    if (!fs.space.is_grid_axis(axis)) {
      for (int k = 0; k < fs.space.axis_cells(axis); ++k) {
        cs.push_back(static_cast<double>(k));
        ws.push_back(1.0);
      }
      continue;
    }
    const auto& bs = parts[static_cast<std::size_t>(d)];
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
      cs.push_back(0.5 * (bs[k] + bs[k + 1]));
      ws.push_back(bs[k + 1] - bs[k]);
    }
  }
  std::vector<double> coords(static_cast<std::size_t>(fs.space.dims()));
  for (std::size_t i = 0; i < fs.kept.size(); ++i)
    coords[static_cast<std::size_t>(fs.kept[i])] = kept_coords[i];
  std::vector<std::size_t> odo(static_cast<std::size_t>(nd), 0);
  double sum = 0.0;
  while (true) {
    double vol = 1.0;
    for (int d = 0; d < nd; ++d) {
      coords[static_cast<std::size_t>(fs.dropped[static_cast<std::size_t>(d)])] =
          centers[static_cast<std::size_t>(d)][odo[static_cast<std::size_t>(d)]];
      vol *= widths[static_cast<std::size_t>(d)][odo[static_cast<std::size_t>(d)]];
    }
    const double v = eval(coords);
    if (std::isinf(v) || std::isnan(v)) {
      infinite = true;
      return HUGE_VAL;
    }
    sum += v * vol;
    int d = nd - 1;
    for (; d >= 0; --d) {
      auto& o = odo[static_cast<std::size_t>(d)];
      if (++o < centers[static_cast<std::size_t>(d)].size()) break;
      o = 0;
    }
    if (d < 0) break;
  }
  return sum;
}

double next_low(const GridAxis& g, double lo) {
  if (g.low.kind == AxisEnd::Kind::open_limit) return g.low.limit + 0.5 * (lo - g.low.limit);
  return lo < 0 ? 2.0 * lo : 0.5 * lo;
}

double next_high(const GridAxis& g, double hi) {
  if (g.high.kind == AxisEnd::Kind::open_limit) return g.high.limit - 0.5 * (g.high.limit - hi);
  return hi > 0 ? 2.0 * hi : 0.5 * hi;
}

// Extends the dropped axes for one fiber, starting from `baseline` mass over
// the stored dropped truncation. Classifies each extendable end.
FiberValue fiber_extend(const FiberSetup& fs, const DensityFn& eval,
                        std::span<const double> kept_coords, double baseline,
                        std::vector<double>* step_totals = nullptr) {
  FiberValue out;
  out.value = baseline;
  if (step_totals) step_totals->push_back(baseline);

  const int nd = static_cast<int>(fs.dropped.size());
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(nd));
  for (int d = 0; d < nd; ++d) {
    const int axis = fs.dropped[static_cast<std::size_t>(d)];
    if (!fs.space.is_grid_axis(axis)) continue;
    const auto& g = fs.space.grid_axis(axis);
    auto& bs = parts[static_cast<std::size_t>(d)];
    for (int k = 0; k <= g.cells; ++k) bs.push_back(g.boundary(k));
  }
  if (!fs.extend) return out;

  struct End {
    int d;
    bool low;
    std::vector<double> inc;
    bool decided = false;
    TraceClass cls = TraceClass::converged;
    double tail = 0.0;
    int steps = 0;
  };
  std::vector<End> ends;
  for (int d = 0; d < nd; ++d) {
    const int axis = fs.dropped[static_cast<std::size_t>(d)];
    if (!fs.space.is_grid_axis(axis)) continue;
    const auto& g = fs.space.grid_axis(axis);
    if (g.low.extendable()) ends.push_back({d, true, {}, {}, {}, {}, {}});
    if (g.high.extendable()) ends.push_back({d, false, {}, {}, {}, {}, {}});
  }
  if (ends.empty()) return out;

  bool infinite = false;
  auto move_once = [&](End& e) -> bool {
    const int axis = fs.dropped[static_cast<std::size_t>(e.d)];
    const auto& g = fs.space.grid_axis(axis);
    auto& bs = parts[static_cast<std::size_t>(e.d)];
    const double before = e.low ? bs.front() : bs.back();
    const double after = e.low ? next_low(g, before) : next_high(g, before);
    if (e.low ? !(after < before) : !(after > before)) return false;
    // Shell partition for this end; other dropped axes keep their partitions.
    auto shell = segment_bounds(g, e.low ? after : before, e.low ? before : after,
                                fs.protocol.shell_cells);
    std::vector<std::vector<double>> shell_parts(static_cast<std::size_t>(nd));
    for (int d2 = 0; d2 < nd; ++d2) {
      if (d2 == e.d) {
        shell_parts[static_cast<std::size_t>(d2)] = shell;
      } else {
        shell_parts[static_cast<std::size_t>(d2)] =
            coarsen_bounds(parts[static_cast<std::size_t>(d2)], 96);
      }
    }
    const double inc = dropped_sum(fs, eval, kept_coords, shell_parts, infinite);
    if (infinite) return false;
    if (e.low) {
      shell.pop_back();
      bs.insert(bs.begin(), shell.begin(), shell.end());
    } else {
      bs.insert(bs.end(), shell.begin() + 1, shell.end());
    }
    e.inc.push_back(inc);
    ++e.steps;
    out.value += inc;
    if (step_totals) step_totals->push_back(out.value);
    return true;
  };
  auto decide = [&](End& e, bool budget_spent) {
    const auto cls = classify_increments(e.inc, out.value, fs.protocol);
    if (cls != TraceClass::inconclusive) {
      e.cls = cls;
      e.decided = true;
      if (cls == TraceClass::converged && !e.inc.empty()) e.tail = e.inc.back();
    } else if (budget_spent) {
      e.cls = TraceClass::inconclusive;
      e.decided = true;
    }
  };

  for (int step = 1; step <= fs.protocol.steps && !infinite; ++step) {
    for (auto& e : ends)
      if (!e.decided && !move_once(e)) e.decided = true;
  }
  if (!infinite) {
    for (auto& e : ends) decide(e, false);
    bool progressed = true;
    while (progressed && !infinite) {
      progressed = false;
      for (auto& e : ends) {
        if (e.decided || infinite) continue;
        if (e.steps >= fs.protocol.max_auto_steps || !move_once(e)) {
          decide(e, true);
          continue;
        }
        decide(e, false);
        progressed = true;
      }
    }
  }
  if (infinite) {
    out.infinite = true;
    return out;
  }
  double tails = 0.0;
  for (const auto& e : ends) {
    if (e.cls == TraceClass::unbounded) out.infinite = true;
    if (e.cls == TraceClass::inconclusive) out.inconclusive = true;
    tails += e.tail;
  }
  if (!out.infinite) out.value += tails;
  return out;
}

}  // namespace

Law marginal(const Law& joint, std::vector<int> keep_axes, const MarginalOptions& opt) {
  opt.protocol.validate();
  const auto& space = joint.space();
  std::sort(keep_axes.begin(), keep_axes.end());
  keep_axes.erase(std::unique(keep_axes.begin(), keep_axes.end()), keep_axes.end());
  if (keep_axes.empty()) throw ResolutionError("marginal must keep at least one axis");
  for (int a : keep_axes)
    if (a < 0 || a >= space.dims()) throw ResolutionError("marginal axis out of range");
  if (static_cast<int>(keep_axes.size()) == space.dims())
    throw ResolutionError("marginal must drop at least one axis");

  std::vector<int> dropped;
  for (int i = 0; i < space.dims(); ++i)
    if (!std::binary_search(keep_axes.begin(), keep_axes.end(), i)) dropped.push_back(i);

  GroundSpace kept_space = space.subspace(keep_axes);
  const auto& rep = joint.rep();

  // Pure finite: exact sums.
  if (rep.atom_mode()) {
    std::vector<ExtendedMass> sums(static_cast<std::size_t>(kept_space.n_cells()),
                                   ExtendedMass(Rat(0)));
    for (std::int64_t cell = 0; cell < space.n_cells(); ++cell) {
      auto multi = space.cell_multi(cell);
      std::vector<int> kept_multi;
      for (int a : keep_axes) kept_multi.push_back(multi[static_cast<std::size_t>(a)]);
      sums[static_cast<std::size_t>(kept_space.cell_index(kept_multi))] += rep.atom(cell);
    }
    return make_canonical_law(Measure::atoms(std::move(kept_space), std::move(sums)), {},
                              joint.gauge(), joint.exact_gauge());
  }

  // Stored-resolution fiber sums in one pass.
  std::vector<double> values(static_cast<std::size_t>(kept_space.n_cells()), 0.0);
  std::vector<std::uint8_t> inf(static_cast<std::size_t>(kept_space.n_cells()), 0);
  std::vector<int> kept_multi(keep_axes.size());
  for (std::int64_t cell = 0; cell < space.n_cells(); ++cell) {
    auto multi = space.cell_multi(cell);
    for (std::size_t i = 0; i < keep_axes.size(); ++i)
      kept_multi[i] = multi[static_cast<std::size_t>(keep_axes[i])];
    const auto kc = kept_space.cell_index(kept_multi);
    if (rep.inf(cell)) {
      inf[static_cast<std::size_t>(kc)] = 1;
      continue;
    }
    const double dropped_vol = space.cell_volume(cell) / kept_space.cell_volume(kc);
    values[static_cast<std::size_t>(kc)] += rep.value(cell) * dropped_vol;
  }

  FiberSetup fs{space, keep_axes, dropped, opt.protocol, opt.extend};
  bool dropped_extendable = false;
  for (int a : dropped)
    if (space.is_grid_axis(a)) {
      const auto& g = space.grid_axis(a);
      dropped_extendable = dropped_extendable || g.low.extendable() || g.high.extendable();
    }

  if (opt.extend && dropped_extendable && rep.evaluator()) {
    const DensityFn eval = *rep.evaluator();
    std::vector<double> kept_coords(keep_axes.size());
    for (std::int64_t kc = 0; kc < kept_space.n_cells(); ++kc) {
      if (inf[static_cast<std::size_t>(kc)]) continue;
      kept_space.cell_center_into(kc, kept_coords);
      const auto fv =
          fiber_extend(fs, eval, kept_coords, values[static_cast<std::size_t>(kc)]);
      if (fv.infinite) {
        inf[static_cast<std::size_t>(kc)] = 1;
        values[static_cast<std::size_t>(kc)] = 0.0;
      } else {
        values[static_cast<std::size_t>(kc)] = fv.value;
      }
    }
  }

  Measure result = Measure::from_values(kept_space, std::move(values), std::move(inf));
  if (rep.evaluator()) {
    const DensityFn eval = *rep.evaluator();
    FiberSetup fs_eval = fs;
    result = result.with_evaluator([fs_eval, eval](std::span<const double> kept_coords) {
      bool infinite = false;
      const int nd = static_cast<int>(fs_eval.dropped.size());
      std::vector<std::vector<double>> parts(static_cast<std::size_t>(nd));
      for (int d = 0; d < nd; ++d) {
        const int axis = fs_eval.dropped[static_cast<std::size_t>(d)];
        if (!fs_eval.space.is_grid_axis(axis)) continue;
        const auto& g = fs_eval.space.grid_axis(axis);
        for (int k = 0; k <= g.cells; ++k)
          parts[static_cast<std::size_t>(d)].push_back(g.boundary(k));
      }
      const double baseline = dropped_sum(fs_eval, eval, kept_coords, parts, infinite);
      if (infinite) return HUGE_VAL;
      const auto fv = fiber_extend(fs_eval, eval, kept_coords, baseline);
      return fv.infinite ? HUGE_VAL : fv.value;
    });
  }
  return make_canonical_law(std::move(result), {}, joint.gauge(), joint.exact_gauge());
}

}  // namespace renyi
