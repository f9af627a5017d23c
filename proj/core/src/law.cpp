#include "renyi/law.hpp"

#include <cmath>

#include "renyi/errors.hpp"
#include "renyi/sigma_finiteness.hpp"

namespace renyi {

SetSpec cell_box_spec(const GroundSpace& space, std::int64_t cell) {
  auto multi = space.cell_multi(cell);
  SetSpec spec = SetSpec::whole(space);
  for (int i = 0; i < space.dims(); ++i) {
    const int k = multi[static_cast<std::size_t>(i)];
    if (space.is_grid_axis(i)) {
      const auto& g = space.grid_axis(i);
      spec.interval(i, g.boundary(k), g.boundary(k + 1));
    } else {
      spec.labels(i, {space.finite_axis(i).labels[static_cast<std::size_t>(k)]});
    }
  }
  return spec;
}

namespace {

std::optional<SetSpec> default_calibration(const Measure& m) {
  if (m.total_mass().finite_positive()) return SetSpec::whole(m.space());
  const auto cell = m.first_positive_cell();
  if (cell >= 0) return cell_box_spec(m.space(), cell);
  return std::nullopt;
}

struct Canonicalization {
  std::optional<SetSpec> calib;
  double scale = 1.0;
  std::optional<Rat> exact_scale;
};

Canonicalization canonicalization_of(const Measure& m, std::optional<SetSpec> calibration) {
  Canonicalization c;
  c.calib = calibration ? std::move(calibration) : default_calibration(m);
  if (!c.calib) {
    if (!m.has_infinite_cell())
      throw Error("a measure with zero total mass does not define a law");
    c.exact_scale = Rat(1);
    return c;  // uncalibrated; scaling cannot move an all-infinite representative
  }
  const auto mass = m.mass(resolve(m.space(), *c.calib));
  if (!mass.finite_positive())
    throw Error("calibration set must have finite positive mass");
  if (mass.is_exact()) {
    c.exact_scale = Rat(1) / mass.exact();
    c.scale = to_double(*c.exact_scale);
  } else {
    c.scale = 1.0 / mass.as_double();
  }
  return c;
}

}  // namespace

Law Law::from_measure(Measure m, std::optional<SetSpec> calibration) {
  auto c = canonicalization_of(m, std::move(calibration));
  Law law;
  law.rep_ = std::move(m);
  law.calib_ = std::move(c.calib);
  law.canonical_scale_ = c.scale;
  law.exact_canonical_scale_ = c.exact_scale;
  law.gauge_ = 1.0;
  law.exact_gauge_ = Rat(1);
  return law;
}

Law Law::from_density(GroundSpace space, DensityFn f, std::optional<SetSpec> calibration) {
  return from_measure(Measure::from_density(std::move(space), std::move(f)),
                      std::move(calibration));
}

Law Law::from_atoms(GroundSpace space, std::vector<ExtendedMass> masses,
                    std::optional<SetSpec> calibration) {
  return from_measure(Measure::atoms(std::move(space), std::move(masses)),
                      std::move(calibration));
}

Measure Law::canonical_rep() const {
  if (is_canonical()) return rep_;
  if (exact_canonical_scale_ && rep_.all_exact()) return rep_.scaled(*exact_canonical_scale_);
  return rep_.scaled(canonical_scale_);
}

bool Law::is_canonical() const {
  if (exact_canonical_scale_) return *exact_canonical_scale_ == 1;
  return canonical_scale_ == 1.0;
}

Law make_canonical_law(Measure raw, std::optional<SetSpec> calibration, double parent_gauge,
                       const std::optional<Rat>& parent_exact_gauge) {
  auto c = canonicalization_of(raw, std::move(calibration));
  Law law;
  if (!c.calib) {
    law.rep_ = std::move(raw);
  } else if (c.exact_scale && raw.all_exact()) {
    law.rep_ = raw.scaled(*c.exact_scale);
  } else {
    law.rep_ = raw.scaled(c.scale);
  }
  law.calib_ = std::move(c.calib);
  law.canonical_scale_ = 1.0;
  law.exact_canonical_scale_ = Rat(1);
  law.gauge_ = c.scale * parent_gauge;
  if (c.exact_scale && parent_exact_gauge)
    law.exact_gauge_ = Rat(*c.exact_scale * *parent_exact_gauge);
  return law;
}

ProportionalityReport proportional(const Law& a, const Law& b, double tol) {
  if (a.space() != b.space())
    throw IncomparableError("laws live on different spaces");
  const Measure& ma = a.rep();
  const Measure& mb = b.rep();
  const bool exact = ma.all_exact() && mb.all_exact();
  constexpr double kFloor = 1e-300;

  ProportionalityReport rep;
  rep.exact = exact;
  std::int64_t inf_matched = 0;
  bool inf_mismatch = false;
  bool a_has_support = false;
  bool b_has_support = false;

  std::optional<Rat> rmin_exact, rmax_exact;
  double rmin = HUGE_VAL, rmax = 0.0;

  const std::int64_t n = a.space().n_cells();
  for (std::int64_t i = 0; i < n; ++i) {
    const bool ia = ma.inf(i);
    const bool ib = mb.inf(i);
    if (ia || ib) {
      a_has_support = a_has_support || ia;
      b_has_support = b_has_support || ib;
      if (ia && ib) {
        ++inf_matched;
      } else {
        inf_mismatch = true;
      }
      continue;
    }
    if (exact) {
      const Rat& va = ma.atom(i).exact();
      const Rat& vb = mb.atom(i).exact();
      a_has_support = a_has_support || va > 0;
      b_has_support = b_has_support || vb > 0;
      if (va > 0 && vb > 0) {
        Rat r = va / vb;
        if (!rmin_exact || r < *rmin_exact) rmin_exact = r;
        if (!rmax_exact || r > *rmax_exact) rmax_exact = r;
        ++rep.cells_compared;
      }
    } else {
      const double va = ma.value(i);
      const double vb = mb.value(i);
      a_has_support = a_has_support || va > kFloor;
      b_has_support = b_has_support || vb > kFloor;
      if (va > kFloor && vb > kFloor) {
        const double r = va / vb;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        ++rep.cells_compared;
      }
    }
  }

  if (inf_mismatch) {
    rep.proportional = false;
    rep.spread = HUGE_VAL;
    rep.note = "infinite cell in one law faces a finite cell in the other";
    return rep;
  }
  if (rep.cells_compared == 0) {
    if (inf_matched > 0) {
      rep.proportional = true;
      rep.constant = 1.0;
      rep.spread = 1.0;
      rep.note = "supports are matching infinite cells only";
      return rep;
    }
    if (a_has_support && b_has_support)
      throw IncomparableError("laws have disjoint supports");
    throw IncomparableError("no common positive-density region");
  }

  if (exact) {
    rep.spread = to_double(*rmax_exact / *rmin_exact);
    rep.proportional = (*rmin_exact == *rmax_exact);
    if (rep.proportional) {
      rep.exact_constant = *rmin_exact;
      rep.constant = to_double(*rmin_exact);
    } else {
      rep.constant = std::sqrt(to_double(*rmin_exact) * to_double(*rmax_exact));
    }
    return rep;
  }
  rep.spread = rmax / rmin;
  rep.proportional = rep.spread <= 1.0 + tol;
  rep.constant = std::sqrt(rmin * rmax);
  return rep;
}

Law condition_on_event(const Law& law, const SetSpec& event) {
  return condition_on_event(law, event, ExtensionProtocol{});
}

Law condition_on_event(const Law& law, const SetSpec& event, const ExtensionProtocol& protocol) {
  const auto cells = resolve(law.space(), event);
  const auto stored = law.rep().mass(cells);
  if (stored.is_infinite())
    throw NonNormalizableError("event has infinite mass; condition via disintegration instead");
  if (stored.is_zero()) throw NullEventError("event has zero mass");

  if (event.unbounded_on(law.space()) && law.rep().evaluator()) {
    const auto ext = mass_with_extension(law.rep(), event, protocol);
    if (ext.cls == TraceClass::unbounded || ext.value.is_infinite())
      throw NonNormalizableError(
          "event mass grows without bound under truncation extension; "
          "condition via disintegration instead");
    if (ext.cls == TraceClass::inconclusive)
      throw NonNormalizableError(
          "event mass could not be classified under the extension protocol");
  }

  return make_canonical_law(law.rep().restricted(cells, event), event, law.gauge(),
                            law.exact_gauge());
}

}  // namespace renyi
