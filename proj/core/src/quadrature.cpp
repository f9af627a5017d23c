#include "renyi/quadrature.hpp"

#include <cmath>

#include "renyi/errors.hpp"

namespace renyi {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

double next_low(const GridAxis& g, double lo) {
  if (g.low.kind == AxisEnd::Kind::open_limit) return g.low.limit + 0.5 * (lo - g.low.limit);
  return lo < 0 ? 2.0 * lo : 0.5 * lo;
}

double next_high(const GridAxis& g, double hi) {
  if (g.high.kind == AxisEnd::Kind::open_limit) return g.high.limit - 0.5 * (g.high.limit - hi);
  return hi > 0 ? 2.0 * hi : 0.5 * hi;
}

}  // namespace

double integrate_cells(const std::vector<double>& bounds,
                       const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double mid = 0.5 * (bounds[k] + bounds[k + 1]);
    const double half = 0.5 * (bounds[k + 1] - bounds[k]);
    double cell = 0.0;
    for (int i = 0; i < 8; ++i) cell += kGlW[i] * f(mid + half * kGlX[i]);
    sum += cell * half;
  }
  return sum;
}

std::vector<double> segment_bounds(const GridAxis& axis, double a, double b, int cells) {
  if (!(a < b)) throw ResolutionError("segment requires a < b");
  std::vector<double> bs(static_cast<std::size_t>(cells) + 1);
  const bool geo = axis.spacing == Spacing::geometric && a > 0.0;
  for (int k = 0; k <= cells; ++k) {
    const double t = static_cast<double>(k) / cells;
    bs[static_cast<std::size_t>(k)] = geo ? a * std::pow(b / a, t) : a + t * (b - a);
  }
  return bs;
}

double integrate_segment(const GridAxis& axis, double a, double b,
                         const std::function<double(double)>& f, int cells) {
  return integrate_cells(segment_bounds(axis, a, b, cells), f);
}

AxisIntegral integrate_axis(const GridAxis& axis, const std::function<double(double)>& f,
                            const ExtensionProtocol& p) {
  p.validate();
  AxisIntegral out;
  std::vector<double> stored(static_cast<std::size_t>(axis.cells) + 1);
  for (int k = 0; k <= axis.cells; ++k) stored[static_cast<std::size_t>(k)] = axis.boundary(k);
  out.value = integrate_cells(stored, f);
  out.step_totals.push_back(out.value);

  struct End {
    bool low;
    double bound;
    std::vector<double> inc;
    bool decided = false;
    TraceClass cls = TraceClass::converged;
    double tail = 0.0;
    int steps = 0;
  };
  std::vector<End> ends;
  if (axis.low.extendable()) ends.push_back({true, axis.lo, {}, {}, {}, {}, {}});
  if (axis.high.extendable()) ends.push_back({false, axis.hi, {}, {}, {}, {}, {}});
  if (ends.empty()) return out;

  auto move_once = [&](End& e) -> bool {
    const double before = e.bound;
    const double after = e.low ? next_low(axis, before) : next_high(axis, before);
    if (e.low ? !(after < before) : !(after > before)) return false;
    const double a = e.low ? after : before;
    const double b = e.low ? before : after;
    const double inc = integrate_segment(axis, a, b, f, p.shell_cells);
    e.bound = after;
    e.inc.push_back(inc);
    ++e.steps;
    out.value += inc;
    out.step_totals.push_back(out.value);
    return true;
  };
  auto decide = [&](End& e, bool budget_spent) {
    const auto cls = classify_increments(e.inc, out.value, p);
    if (cls != TraceClass::inconclusive) {
      e.cls = cls;
      e.decided = true;
      if (cls == TraceClass::converged && !e.inc.empty()) e.tail = e.inc.back();
    } else if (budget_spent) {
      e.cls = TraceClass::inconclusive;
      e.decided = true;
    }
  };

  for (int step = 1; step <= p.steps; ++step) {
    for (auto& e : ends)
      if (!e.decided && !move_once(e)) e.decided = true;
  }
  for (auto& e : ends) decide(e, false);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (auto& e : ends) {
      if (e.decided) continue;
      if (e.steps >= p.max_auto_steps || !move_once(e)) {
        decide(e, true);
        continue;
      }
      decide(e, false);
      progressed = true;
    }
  }

  out.cls = TraceClass::converged;
  double tails = 0.0;
  for (const auto& e : ends) {
    if (e.cls == TraceClass::unbounded) out.cls = TraceClass::unbounded;
    if (e.cls == TraceClass::inconclusive && out.cls != TraceClass::unbounded)
      out.cls = TraceClass::inconclusive;
    tails += e.tail;
  }
  if (out.cls == TraceClass::converged) out.value += tails;
  return out;
}

}  // namespace renyi
