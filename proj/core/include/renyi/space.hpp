#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace renyi {

enum class Spacing { linear, geometric };

// Behavior of a truncation bound under the extension protocol.
// fixed       : the bound is part of the model, never moved.
// unbounded   : true support continues to +/- infinity; bound doubles per step.
// open_limit  : true support approaches an excluded endpoint c; the gap to c
//               halves per step.
struct AxisEnd {
  enum class Kind { fixed, unbounded, open_limit };
  Kind kind = Kind::fixed;
  double limit = 0.0;

  static AxisEnd fixed() { return {}; }
  static AxisEnd unbounded() { return {Kind::unbounded, 0.0}; }
  static AxisEnd open_limit(double c) { return {Kind::open_limit, c}; }
  bool extendable() const { return kind != Kind::fixed; }
};

struct FiniteAxis {
  std::string name;
  std::vector<std::string> labels;  // distinct, ordered

  int index_of(const std::string& label) const;  // -1 if absent
};

// Partition of [lo, hi] into `cells` intervals, linear or geometric spacing.
// Geometric spacing requires 0 < lo < hi.
struct GridAxis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  int cells = 1;
  Spacing spacing = Spacing::linear;
  AxisEnd low{};
  AxisEnd high{};

  double boundary(int k) const;  // k in [0, cells]
  double center(int k) const { return 0.5 * (boundary(k) + boundary(k + 1)); }
  double width(int k) const { return boundary(k + 1) - boundary(k); }
  int locate(double x) const;  // containing cell, -1 when outside [lo, hi]
  void validate() const;
};

using Axis = std::variant<FiniteAxis, GridAxis>;

int axis_cell_count(const Axis& a);
const std::string& axis_name(const Axis& a);
bool axis_equal(const Axis& a, const Axis& b);

// A product of 1..4 axes, each finite (labelled points) or gridded. This is
// the numerical stand-in for a measurable space: all set operations happen at
// the resolution of the cell partition.
class GroundSpace {
 public:
  static constexpr int kMaxAxes = 4;
  static constexpr std::int64_t kMaxCells = std::int64_t{1} << 22;

  explicit GroundSpace(std::vector<Axis> axes);

  static GroundSpace finite(std::vector<std::string> labels, std::string name = "x");
  static GroundSpace grid1(GridAxis a);

  int dims() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_.at(i); }
  const std::vector<Axis>& axes() const { return axes_; }
  int axis_index(const std::string& name) const;  // -1 if absent
  bool is_grid_axis(int i) const { return std::holds_alternative<GridAxis>(axes_.at(i)); }
  const GridAxis& grid_axis(int i) const { return std::get<GridAxis>(axes_.at(i)); }
  const FiniteAxis& finite_axis(int i) const { return std::get<FiniteAxis>(axes_.at(i)); }

  std::int64_t n_cells() const { return n_cells_; }
  int axis_cells(int i) const { return axis_cell_count(axes_.at(i)); }
  bool pure_finite() const;
  bool has_extendable_axis() const;

  std::int64_t cell_index(std::span<const int> multi) const;
  std::vector<int> cell_multi(std::int64_t cell) const;
  // Per-axis coordinate of a cell: grid axes report the cell center, finite
  // axes the label index.
  std::vector<double> cell_center(std::int64_t cell) const;
  void cell_center_into(std::int64_t cell, std::span<double> out) const;
  // Product of grid-axis cell widths; finite axes contribute 1.
  double cell_volume(std::int64_t cell) const;

  // Subspace formed by a subset of axes (order preserved).
  GroundSpace subspace(std::span<const int> axes_kept) const;

  friend bool operator==(const GroundSpace& a, const GroundSpace& b);
  friend bool operator!=(const GroundSpace& a, const GroundSpace& b) { return !(a == b); }

 private:
  std::vector<Axis> axes_;
  std::vector<std::int64_t> stride_;
  std::int64_t n_cells_ = 0;
};

// Per-axis selection: everything, a label subset (finite axes), or a
// coordinate interval (grid axes). Missing interval ends mean "to the edge of
// the (possibly extended) space" and participate in the extension protocol.
struct AxisSel {
  enum class Kind { all, labels, interval };
  Kind kind = Kind::all;
  std::vector<std::string> labels;
  std::optional<double> lo, hi;

  static AxisSel all() { return {}; }
  static AxisSel label_set(std::vector<std::string> ls) {
    return {Kind::labels, std::move(ls), {}, {}};
  }
  static AxisSel interval(std::optional<double> lo, std::optional<double> hi) {
    return {Kind::interval, {}, lo, hi};
  }
};

// Axis-aligned product set: one selection per axis. Stays meaningful under
// truncation extension, unlike raw cell masks.
struct SetSpec {
  std::vector<AxisSel> axes;

  static SetSpec whole(const GroundSpace& s) { return SetSpec{std::vector<AxisSel>(s.dims())}; }
  SetSpec& select(int axis, AxisSel sel) {
    axes.at(axis) = std::move(sel);
    return *this;
  }
  SetSpec& interval(int axis, double lo, double hi) {
    return select(axis, AxisSel::interval(lo, hi));
  }
  SetSpec& labels(int axis, std::vector<std::string> ls) {
    return select(axis, AxisSel::label_set(std::move(ls)));
  }
  // True when the selection reaches an extendable end of some axis.
  bool unbounded_on(const GroundSpace& s) const;
  std::string describe(const GroundSpace& s) const;
};

// Mask over the cells of one space.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::int64_t n) : mask_(static_cast<std::size_t>(n), 0) {}
  static CellSet all(std::int64_t n);
  static CellSet of(std::int64_t n, std::span<const std::int64_t> idx);

  std::int64_t size() const { return static_cast<std::int64_t>(mask_.size()); }
  bool contains(std::int64_t i) const { return mask_[static_cast<std::size_t>(i)] != 0; }
  void insert(std::int64_t i) { mask_[static_cast<std::size_t>(i)] = 1; }
  std::int64_t count() const;
  bool empty() const { return count() == 0; }
  std::int64_t first() const;  // -1 when empty

  CellSet operator&(const CellSet& o) const;
  CellSet operator|(const CellSet& o) const;
  CellSet complement() const;
  bool subset_of(const CellSet& o) const;
  bool intersects(const CellSet& o) const;
  friend bool operator==(const CellSet& a, const CellSet& b) { return a.mask_ == b.mask_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::int64_t i = 0; i < size(); ++i)
      if (mask_[static_cast<std::size_t>(i)]) f(i);
  }

 private:
  std::vector<std::uint8_t> mask_;
};

// Cells whose centers satisfy the selection. Grid intervals use the
// closed-interval center rule; centers never sit on cell boundaries, so
// boundary-aligned boxes resolve exactly.
CellSet resolve(const GroundSpace& space, const SetSpec& spec);

// Coordinate-level membership test (used when a set must be followed past the
// stored truncation).
bool spec_contains(const GroundSpace& space, const SetSpec& spec, std::span<const double> coords);

}  // namespace renyi
