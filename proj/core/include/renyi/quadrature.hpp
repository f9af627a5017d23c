#pragma once

#include <functional>
#include <vector>

#include "renyi/sigma_finiteness.hpp"
#include "renyi/space.hpp"

namespace renyi {

// Composite 8-point Gauss-Legendre over consecutive cells given by their
// boundaries. Used when integrating an axis out of a smooth density; mass()
// on stored representations stays midpoint-at-stored-resolution.
double integrate_cells(const std::vector<double>& bounds,
                       const std::function<double(double)>& f);

// Boundaries of [a, b] cut into `cells` pieces with the axis's spacing rule.
std::vector<double> segment_bounds(const GridAxis& axis, double a, double b, int cells);

double integrate_segment(const GridAxis& axis, double a, double b,
                         const std::function<double(double)>& f, int cells);

struct AxisIntegral {
  double value = 0.0;
  TraceClass cls = TraceClass::converged;
  std::vector<double> step_totals;  // running totals after each extension step
};

// Integral of f over the axis, starting from the stored truncation and
// extending every open end per the protocol until the tail converges or the
// growth is classified unbounded.
AxisIntegral integrate_axis(const GridAxis& axis, const std::function<double(double)>& f,
                            const ExtensionProtocol& p = {});

}  // namespace renyi
