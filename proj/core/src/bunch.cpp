#include "renyi/bunch.hpp"

#include "renyi/errors.hpp"
#include "renyi/law.hpp"

namespace renyi {

Bunch::Bunch(std::vector<SetSpec> chain, bool covers_in_limit) {
  for (auto& spec : chain) elems_.push_back({std::move(spec), ExtendedMass(Rat(0)), ""});
  covers_in_limit_ = covers_in_limit;
}

Bunch Bunch::witness(std::vector<BunchElement> elems) {
  Bunch b;
  b.elems_ = std::move(elems);
  b.covers_in_limit_ = true;
  return b;
}

void Bunch::validate(const Law& law) {
  if (elems_.empty()) throw InvalidBunchError("bunch is empty");
  const auto& space = law.space();
  CellSet prev;
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    auto cells = resolve(space, elems_[i].spec);
    const auto mass = law.rep().mass(cells);
    if (!mass.finite_positive())
      throw InvalidBunchError("bunch element " + std::to_string(i) +
                              " must have finite positive mass");
    elems_[i].mass = mass;
    if (i > 0) {
      if (!prev.subset_of(cells) || prev == cells)
        throw InvalidBunchError("bunch elements must strictly increase");
    }
    prev = std::move(cells);
  }
  if (!covers_in_limit_) {
    // The last element must exhaust the stored space; ladders built by the
    // extension protocol cover in the limit instead.
    bool covers = prev == CellSet::all(space.n_cells());
    if (!covers) {
      // Chains that run to the truncation edge on every extendable axis also
      // qualify: they exhaust the space as the truncation is extended.
      covers = space.has_extendable_axis();
      for (int i = 0; covers && i < space.dims(); ++i) {
        if (!space.is_grid_axis(i)) continue;
        const auto& sel = elems_.back().spec.axes[static_cast<std::size_t>(i)];
        if (sel.kind == AxisSel::Kind::all) continue;
        covers = false;
      }
    }
    if (!covers)
      throw InvalidBunchError("bunch union does not cover the space");
  }
}

}  // namespace renyi
