#include "renyi/renyi_family.hpp"

#include <cmath>

#include "renyi/errors.hpp"

namespace renyi {

RenyiFamily::RenyiFamily(GroundSpace space, std::vector<SetSpec> bunch,
                         std::vector<Law> conditionals)
    : space_(std::move(space)), bunch_(std::move(bunch)), conditionals_(std::move(conditionals)) {
  if (bunch_.size() != conditionals_.size())
    throw InvalidBunchError("family needs one conditional per bunch element");
  if (bunch_.empty()) throw InvalidBunchError("family needs a nonempty bunch");
}

RenyiFamily renyi_family_from_law(const Law& law, const std::vector<SetSpec>& chain) {
  if (chain.empty()) throw InvalidBunchError("bunch is empty");
  const auto& space = law.space();
  CellSet prev;
  std::vector<Law> conditionals;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto cells = resolve(space, chain[i]);
    const auto mass = law.rep().mass(cells);
    if (mass.is_zero())
      throw InvalidBunchError("bunch element " + std::to_string(i) + " has zero mass");
    if (mass.is_infinite())
      throw InvalidBunchError("bunch element " + std::to_string(i) + " has infinite mass");
    if (i > 0 && !(prev.subset_of(cells) && !(prev == cells)))
      throw InvalidBunchError("bunch elements must strictly increase");
    conditionals.push_back(condition_on_event(law, chain[i]));
    prev = std::move(cells);
  }
  return RenyiFamily(space, chain, std::move(conditionals));
}

RenyiConsistencyReport check_renyi_consistency(const RenyiFamily& family,
                                               const std::vector<SetSpec>& test_sets) {
  const auto& space = family.space();
  RenyiConsistencyReport report;
  report.exact = true;

  std::vector<CellSet> bunch_cells;
  for (std::size_t i = 0; i < family.size(); ++i)
    bunch_cells.push_back(resolve(space, family.element(i)));

  std::optional<Rat> worst_exact;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j) continue;
      if (!(bunch_cells[i].subset_of(bunch_cells[j]))) continue;
      const Law& nu1 = family.conditional(i);
      const Law& nu2 = family.conditional(j);
      const auto b1_given_b2 = nu2.rep().mass(bunch_cells[i]);
      if (b1_given_b2.is_zero())
        throw InvalidBunchError("nu(B1|B2) must be positive for nested bunch elements");
      const bool exact_pair = b1_given_b2.is_exact() && nu1.rep().all_exact() &&
                              nu2.rep().all_exact();
      report.exact = report.exact && exact_pair;
      for (const auto& a_spec : test_sets) {
        auto a_cells = resolve(space, a_spec);
        ++report.pairs_checked;
        double violation;
        if (exact_pair) {
          const Rat lhs = nu1.rep().mass(a_cells).exact() * b1_given_b2.exact();
          const Rat rhs = nu2.rep().mass(a_cells & bunch_cells[i]).exact();
          const Rat diff = lhs > rhs ? lhs - rhs : rhs - lhs;
          violation = to_double(diff);
          if (diff != 0 && (!worst_exact || diff > *worst_exact)) worst_exact = diff;
        } else {
          const double lhs = nu1.rep().mass(a_cells).as_double() * b1_given_b2.as_double();
          const double rhs = nu2.rep().mass(a_cells & bunch_cells[i]).as_double();
          violation = std::abs(lhs - rhs);
        }
        if (violation > report.max_violation) {
          report.max_violation = violation;
          report.worst = "A=" + a_spec.describe(space) +
                         ", B1=" + family.element(i).describe(space) +
                         ", B2=" + family.element(j).describe(space);
        }
      }
    }
  }
  return report;
}

}  // namespace renyi
