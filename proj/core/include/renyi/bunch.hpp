#pragma once

#include <string>
#include <vector>

#include "renyi/extended_mass.hpp"
#include "renyi/space.hpp"

namespace renyi {

class Law;

// An increasing chain B1 c B2 c ... of finite-positive-mass sets whose union
// exhausts the space (in the limit of truncation extension). Elements are
// stored as coordinate-level descriptors so they stay meaningful past the
// stored truncation; masses are recorded when validated against a law.
struct BunchElement {
  SetSpec spec;
  ExtendedMass mass;          // recorded at validation
  std::string note;           // e.g. extension bounds for witness ladders
};

class Bunch {
 public:
  Bunch() = default;
  // `covers_in_limit` declares that the chain exhausts the space as it is
  // extended (e.g. [-n, n] ladders); otherwise the last element must cover
  // the stored space.
  explicit Bunch(std::vector<SetSpec> chain, bool covers_in_limit = false);

  std::size_t size() const { return elems_.size(); }
  const BunchElement& element(std::size_t i) const { return elems_.at(i); }
  const std::vector<BunchElement>& elements() const { return elems_; }
  bool covers_in_limit() const { return covers_in_limit_; }

  // Checks strict inclusion, 0 < mass < inf per element, and coverage of the
  // stored space by the last element (or coverage in the limit for ladders
  // built by the extension protocol). Records masses. Throws
  // InvalidBunchError on violation.
  void validate(const Law& law);

  // Witness ladder assembled by the sigma-finiteness probe.
  static Bunch witness(std::vector<BunchElement> elems);

 private:
  std::vector<BunchElement> elems_;
  bool covers_in_limit_ = false;
};

}  // namespace renyi
