#pragma once

#include <string>
#include <vector>

#include "renyi/bunch.hpp"
#include "renyi/law.hpp"

namespace renyi {

// Probability measures indexed by a bunch: nu(.|B) for each chain element B,
// satisfying nu(A|B1) = nu(A n B1|B2) / nu(B1|B2) for B1 c B2.
class RenyiFamily {
 public:
  RenyiFamily(GroundSpace space, std::vector<SetSpec> bunch, std::vector<Law> conditionals);

  const GroundSpace& space() const { return space_; }
  std::size_t size() const { return bunch_.size(); }
  const SetSpec& element(std::size_t i) const { return bunch_.at(i); }
  const Law& conditional(std::size_t i) const { return conditionals_.at(i); }

  // Test hook: replaces one conditional (e.g. with a deliberately wrong
  // normalization) so the consistency checker can be exercised.
  void replace_conditional(std::size_t i, Law law) { conditionals_.at(i) = std::move(law); }

 private:
  GroundSpace space_;
  std::vector<SetSpec> bunch_;
  std::vector<Law> conditionals_;
};

// nu(.|B) = condition_on_event(law, B) for every chain element. Elements with
// zero or infinite mass raise InvalidBunchError.
RenyiFamily renyi_family_from_law(const Law& law, const std::vector<SetSpec>& chain);

struct RenyiConsistencyReport {
  double max_violation = 0.0;  // |nu(A|B1) * nu(B1|B2) - nu(A n B1|B2)|
  bool exact = false;          // checked in rational arithmetic
  std::size_t pairs_checked = 0;
  std::string worst;  // description of the worst (A, B1, B2) triple
};

// Checks the consistency identity over every stored pair B1 c B2 and every
// test set, and that nu(B1|B2) > 0.
RenyiConsistencyReport check_renyi_consistency(const RenyiFamily& family,
                                               const std::vector<SetSpec>& test_sets);

}  // namespace renyi
