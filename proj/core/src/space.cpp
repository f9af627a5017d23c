#include "renyi/space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "renyi/errors.hpp"

namespace renyi {

int FiniteAxis::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

double GridAxis::boundary(int k) const {
  if (k <= 0) return lo;
  if (k >= cells) return hi;
  const double t = static_cast<double>(k) / cells;
  if (spacing == Spacing::linear) return lo + t * (hi - lo);
  return lo * std::pow(hi / lo, t);
}

int GridAxis::locate(double x) const {
  if (x < lo || x > hi) return -1;
  int k;
  if (spacing == Spacing::linear) {
    k = static_cast<int>((x - lo) / (hi - lo) * cells);
  } else {
    k = static_cast<int>(std::log(x / lo) / std::log(hi / lo) * cells);
  }
  k = std::clamp(k, 0, cells - 1);
  // Guard against rounding at boundaries.
  while (k > 0 && x < boundary(k)) --k;
  while (k < cells - 1 && x >= boundary(k + 1)) ++k;
  return k;
}

void GridAxis::validate() const {
  if (!(lo < hi)) throw ResolutionError("grid axis '" + name + "': requires lo < hi");
  if (cells < 1) throw ResolutionError("grid axis '" + name + "': requires >= 1 cell");
  if (spacing == Spacing::geometric && !(lo > 0))
    throw ResolutionError("grid axis '" + name + "': geometric spacing requires lo > 0");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ResolutionError("grid axis '" + name + "': bounds must be finite");
  if (low.kind == AxisEnd::Kind::open_limit && !(low.limit < lo))
    throw ResolutionError("grid axis '" + name + "': open limit must lie below lo");
  if (high.kind == AxisEnd::Kind::open_limit && !(high.limit > hi))
    throw ResolutionError("grid axis '" + name + "': open limit must lie above hi");
}

int axis_cell_count(const Axis& a) {
  if (const auto* f = std::get_if<FiniteAxis>(&a)) return static_cast<int>(f->labels.size());
  return std::get<GridAxis>(a).cells;
}

const std::string& axis_name(const Axis& a) {
  if (const auto* f = std::get_if<FiniteAxis>(&a)) return f->name;
  return std::get<GridAxis>(a).name;
}

bool axis_equal(const Axis& a, const Axis& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FiniteAxis>(&a)) {
    const auto& fb = std::get<FiniteAxis>(b);
    return fa->name == fb.name && fa->labels == fb.labels;
  }
  const auto& ga = std::get<GridAxis>(a);
  const auto& gb = std::get<GridAxis>(b);
  return ga.name == gb.name && ga.lo == gb.lo && ga.hi == gb.hi && ga.cells == gb.cells &&
         ga.spacing == gb.spacing && ga.low.kind == gb.low.kind && ga.high.kind == gb.high.kind &&
         ga.low.limit == gb.low.limit && ga.high.limit == gb.high.limit;
}

GroundSpace::GroundSpace(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || static_cast<int>(axes_.size()) > kMaxAxes)
    throw ResolutionError("a space needs 1 to 4 axes");
  std::set<std::string> names;
  for (auto& a : axes_) {
    if (auto* f = std::get_if<FiniteAxis>(&a)) {
      if (f->labels.empty()) throw ResolutionError("finite axis '" + f->name + "' has no labels");
      std::set<std::string> ls(f->labels.begin(), f->labels.end());
      if (ls.size() != f->labels.size())
        throw ResolutionError("finite axis '" + f->name + "' has duplicate labels");
    } else {
      std::get<GridAxis>(a).validate();
    }
    if (!names.insert(axis_name(a)).second)
      throw ResolutionError("duplicate axis name '" + axis_name(a) + "'");
  }
  stride_.assign(axes_.size(), 1);
  n_cells_ = 1;
  for (int i = dims() - 1; i >= 0; --i) {
    stride_[static_cast<std::size_t>(i)] = n_cells_;
    n_cells_ *= axis_cell_count(axes_[static_cast<std::size_t>(i)]);
    if (n_cells_ > kMaxCells) throw ResolutionError("space exceeds the materialized-cell budget");
  }
}

GroundSpace GroundSpace::finite(std::vector<std::string> labels, std::string name) {
  return GroundSpace({FiniteAxis{std::move(name), std::move(labels)}});
}

GroundSpace GroundSpace::grid1(GridAxis a) { return GroundSpace({Axis{std::move(a)}}); }

int GroundSpace::axis_index(const std::string& name) const {
  for (int i = 0; i < dims(); ++i)
    if (axis_name(axes_[static_cast<std::size_t>(i)]) == name) return i;
  return -1;
}

bool GroundSpace::pure_finite() const {
  return std::all_of(axes_.begin(), axes_.end(),
                     [](const Axis& a) { return std::holds_alternative<FiniteAxis>(a); });
}

bool GroundSpace::has_extendable_axis() const {
  for (const auto& a : axes_) {
    if (const auto* g = std::get_if<GridAxis>(&a)) {
      if (g->low.extendable() || g->high.extendable()) return true;
    }
  }
  return false;
}

std::int64_t GroundSpace::cell_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != dims())
    throw ResolutionError("cell multi-index arity mismatch");
  std::int64_t idx = 0;
  for (int i = 0; i < dims(); ++i) {
    const int m = multi[static_cast<std::size_t>(i)];
    if (m < 0 || m >= axis_cells(i)) throw ResolutionError("cell multi-index out of range");
    idx += stride_[static_cast<std::size_t>(i)] * m;
  }
  return idx;
}

std::vector<int> GroundSpace::cell_multi(std::int64_t cell) const {
  std::vector<int> multi(static_cast<std::size_t>(dims()));
  for (int i = 0; i < dims(); ++i) {
    multi[static_cast<std::size_t>(i)] =
        static_cast<int>(cell / stride_[static_cast<std::size_t>(i)]);
    cell %= stride_[static_cast<std::size_t>(i)];
  }
  return multi;
}

void GroundSpace::cell_center_into(std::int64_t cell, std::span<double> out) const {
  for (int i = 0; i < dims(); ++i) {
    const auto k = static_cast<int>(cell / stride_[static_cast<std::size_t>(i)]);
    cell %= stride_[static_cast<std::size_t>(i)];
    const auto& a = axes_[static_cast<std::size_t>(i)];
    if (const auto* g = std::get_if<GridAxis>(&a)) {
      out[static_cast<std::size_t>(i)] = g->center(k);
    } else {
      out[static_cast<std::size_t>(i)] = static_cast<double>(k);
    }
  }
}

std::vector<double> GroundSpace::cell_center(std::int64_t cell) const {
  std::vector<double> c(static_cast<std::size_t>(dims()));
  cell_center_into(cell, c);
  return c;
}

double GroundSpace::cell_volume(std::int64_t cell) const {
  double vol = 1.0;
  for (int i = 0; i < dims(); ++i) {
    const auto k = static_cast<int>(cell / stride_[static_cast<std::size_t>(i)]);
    cell %= stride_[static_cast<std::size_t>(i)];
    if (const auto* g = std::get_if<GridAxis>(&axes_[static_cast<std::size_t>(i)]))
      vol *= g->width(k);
  }
  return vol;
}

GroundSpace GroundSpace::subspace(std::span<const int> axes_kept) const {
  std::vector<Axis> sub;
  for (int i : axes_kept) sub.push_back(axes_.at(static_cast<std::size_t>(i)));
  return GroundSpace(std::move(sub));
}

bool operator==(const GroundSpace& a, const GroundSpace& b) {
  if (a.dims() != b.dims()) return false;
  for (int i = 0; i < a.dims(); ++i)
    if (!axis_equal(a.axes_[static_cast<std::size_t>(i)], b.axes_[static_cast<std::size_t>(i)]))
      return false;
  return true;
}

bool SetSpec::unbounded_on(const GroundSpace& s) const {
  if (static_cast<int>(axes.size()) != s.dims())
    throw ResolutionError("set descriptor arity mismatch");
  for (int i = 0; i < s.dims(); ++i) {
    if (!s.is_grid_axis(i)) continue;
    const auto& g = s.grid_axis(i);
    const auto& sel = axes[static_cast<std::size_t>(i)];
    const bool open_low = sel.kind == AxisSel::Kind::all ||
                          (sel.kind == AxisSel::Kind::interval && !sel.lo.has_value());
    const bool open_high = sel.kind == AxisSel::Kind::all ||
                           (sel.kind == AxisSel::Kind::interval && !sel.hi.has_value());
    if ((open_low && g.low.extendable()) || (open_high && g.high.extendable())) return true;
  }
  return false;
}

std::string SetSpec::describe(const GroundSpace& s) const {
  std::ostringstream os;
  for (int i = 0; i < s.dims(); ++i) {
    if (i) os << " x ";
    const auto& sel = axes.at(static_cast<std::size_t>(i));
    os << axis_name(s.axis(i)) << ":";
    switch (sel.kind) {
      case AxisSel::Kind::all:
        os << "*";
        break;
      case AxisSel::Kind::labels: {
        os << "{";
        for (std::size_t j = 0; j < sel.labels.size(); ++j)
          os << (j ? "," : "") << sel.labels[j];
        os << "}";
        break;
      }
      case AxisSel::Kind::interval:
        os << "[" << (sel.lo ? std::to_string(*sel.lo) : "-edge") << ","
           << (sel.hi ? std::to_string(*sel.hi) : "+edge") << "]";
        break;
    }
  }
  return os.str();
}

CellSet CellSet::all(std::int64_t n) {
  CellSet s(n);
  std::fill(s.mask_.begin(), s.mask_.end(), std::uint8_t{1});
  return s;
}

CellSet CellSet::of(std::int64_t n, std::span<const std::int64_t> idx) {
  CellSet s(n);
  for (auto i : idx) s.insert(i);
  return s;
}

std::int64_t CellSet::count() const {
  std::int64_t c = 0;
  for (auto b : mask_) c += b;
  return c;
}

std::int64_t CellSet::first() const {
  for (std::int64_t i = 0; i < size(); ++i)
    if (mask_[static_cast<std::size_t>(i)]) return i;
  return -1;
}

namespace {
void check_same_universe(const CellSet& a, const CellSet& b) {
  if (a.size() != b.size()) throw ResolutionError("cell sets belong to different spaces");
}
}  // namespace

CellSet CellSet::operator&(const CellSet& o) const {
  check_same_universe(*this, o);
  CellSet r(size());
  for (std::int64_t i = 0; i < size(); ++i)
    if (contains(i) && o.contains(i)) r.insert(i);
  return r;
}

CellSet CellSet::operator|(const CellSet& o) const {
  check_same_universe(*this, o);
  CellSet r(size());
  for (std::int64_t i = 0; i < size(); ++i)
    if (contains(i) || o.contains(i)) r.insert(i);
  return r;
}

CellSet CellSet::complement() const {
  CellSet r(size());
  for (std::int64_t i = 0; i < size(); ++i)
    if (!contains(i)) r.insert(i);
  return r;
}

bool CellSet::subset_of(const CellSet& o) const {
  check_same_universe(*this, o);
  for (std::int64_t i = 0; i < size(); ++i)
    if (contains(i) && !o.contains(i)) return false;
  return true;
}

bool CellSet::intersects(const CellSet& o) const {
  check_same_universe(*this, o);
  for (std::int64_t i = 0; i < size(); ++i)
    if (contains(i) && o.contains(i)) return true;
  return false;
}

namespace {

// Selected label indices on a finite axis, validated.
std::vector<std::uint8_t> label_mask(const FiniteAxis& axis, const AxisSel& sel) {
  std::vector<std::uint8_t> mask(axis.labels.size(), 0);
  for (const auto& l : sel.labels) {
    const int idx = axis.index_of(l);
    if (idx < 0)
      throw ResolutionError("label '" + l + "' not on axis '" + axis.name + "'");
    mask[static_cast<std::size_t>(idx)] = 1;
  }
  return mask;
}

}  // namespace

CellSet resolve(const GroundSpace& space, const SetSpec& spec) {
  if (static_cast<int>(spec.axes.size()) != space.dims())
    throw ResolutionError("set descriptor arity mismatch");
  // Per-axis cell masks, combined as a product.
  std::vector<std::vector<std::uint8_t>> axis_mask(static_cast<std::size_t>(space.dims()));
  for (int i = 0; i < space.dims(); ++i) {
    const auto& sel = spec.axes[static_cast<std::size_t>(i)];
    const int n = space.axis_cells(i);
    auto& mask = axis_mask[static_cast<std::size_t>(i)];
    mask.assign(static_cast<std::size_t>(n), 0);
    switch (sel.kind) {
      case AxisSel::Kind::all:
        std::fill(mask.begin(), mask.end(), std::uint8_t{1});
        break;
      case AxisSel::Kind::labels: {
        if (space.is_grid_axis(i))
          throw ResolutionError("label selection on grid axis '" +
                                axis_name(space.axis(i)) + "'");
        mask = label_mask(space.finite_axis(i), sel);
        break;
      }
      case AxisSel::Kind::interval: {
        if (!space.is_grid_axis(i))
          throw ResolutionError("interval selection on finite axis '" +
                                axis_name(space.axis(i)) + "'");
        const auto& g = space.grid_axis(i);
        const double lo = sel.lo.value_or(-HUGE_VAL);
        const double hi = sel.hi.value_or(HUGE_VAL);
        if (lo > hi) throw ResolutionError("empty interval bounds on axis '" + g.name + "'");
        for (int k = 0; k < n; ++k) {
          const double c = g.center(k);
          if (c >= lo && c <= hi) mask[static_cast<std::size_t>(k)] = 1;
        }
        break;
      }
    }
  }
  CellSet out(space.n_cells());
  for (std::int64_t cell = 0; cell < space.n_cells(); ++cell) {
    auto multi = space.cell_multi(cell);
    bool in = true;
    for (int i = 0; i < space.dims() && in; ++i)
      in = axis_mask[static_cast<std::size_t>(i)]
                    [static_cast<std::size_t>(multi[static_cast<std::size_t>(i)])] != 0;
    if (in) out.insert(cell);
  }
  return out;
}

bool spec_contains(const GroundSpace& space, const SetSpec& spec,
                   std::span<const double> coords) {
  if (static_cast<int>(spec.axes.size()) != space.dims() ||
      coords.size() != static_cast<std::size_t>(space.dims()))
    throw ResolutionError("set descriptor arity mismatch");
  for (int i = 0; i < space.dims(); ++i) {
    const auto& sel = spec.axes[static_cast<std::size_t>(i)];
    const double c = coords[static_cast<std::size_t>(i)];
    switch (sel.kind) {
      case AxisSel::Kind::all:
        break;
      case AxisSel::Kind::labels: {
        const auto& axis = space.finite_axis(i);
        const auto k = static_cast<std::size_t>(c);
        bool hit = false;
        for (const auto& l : sel.labels)
          if (axis.index_of(l) == static_cast<int>(k)) hit = true;
        if (!hit) return false;
        break;
      }
      case AxisSel::Kind::interval: {
        if (sel.lo && c < *sel.lo) return false;
        if (sel.hi && c > *sel.hi) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace renyi
