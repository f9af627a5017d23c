#pragma once

#include <vector>

#include "renyi/law.hpp"
#include "renyi/sigma_finiteness.hpp"

namespace renyi {

struct MarginalOptions {
  ExtensionProtocol protocol{};
  // Follow dropped extendable axes past the stored truncation (needs the
  // joint's evaluator). A fiber whose integral keeps growing receives +inf.
  bool extend = true;
};

// Integrates/sums out every axis not in keep_axes. Exact on pure finite
// spaces; midpoint at stored resolution on grids, with per-fiber truncation
// extension of the dropped axes.
Law marginal(const Law& joint, std::vector<int> keep_axes, const MarginalOptions& opt = {});

}  // namespace renyi
