#include "latvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latvar {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Advances p through the box [lo, hi] in row-major order; false when done.
bool advance(LatticePoint& p, const LatticePoint& lo, const LatticePoint& hi) {
  for (int a = static_cast<int>(p.size()) - 1; a >= 0; --a) {
    auto i = static_cast<std::size_t>(a);
    if (p[i] < hi[i]) {
      ++p[i];
      return true;
    }
    p[i] = lo[i];
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(int d, int n, Eigen::VectorXd values)
    : d_(d), n_(n), values_(std::move(values)) {
  if (d < 1) throw InvalidArgument("grid function: dimension must be >= 1");
  if (n < 2) throw InvalidArgument("grid function: need at least 2 points per axis");
  const std::size_t expected = ipow(static_cast<std::size_t>(n), d);
  if (static_cast<std::size_t>(values_.size()) != expected) {
    std::ostringstream os;
    os << "grid function: length mismatch, expected n^d = " << expected << " values, got "
       << values_.size();
    throw InvalidArgument(os.str());
  }
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "grid function: non-finite value at linear index " << i;
      throw InvalidArgument(os.str());
    }
  }
  strides_.assign(static_cast<std::size_t>(d), 1);
  for (int a = d - 2; a >= 0; --a)
    strides_[static_cast<std::size_t>(a)] =
        strides_[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(n);
}

std::size_t GridFunction::linear_index(const LatticePoint& p) const {
  if (!contains(p)) throw InvalidArgument("grid function: lattice point off grid");
  std::size_t lin = 0;
  for (int a = 0; a < d_; ++a) lin += static_cast<std::size_t>(p[static_cast<std::size_t>(a)]) * stride(a);
  return lin;
}

LatticePoint GridFunction::point(std::size_t linear) const {
  LatticePoint p(static_cast<std::size_t>(d_));
  for (int a = d_ - 1; a >= 0; --a) {
    p[static_cast<std::size_t>(a)] = static_cast<int>(linear % static_cast<std::size_t>(n_));
    linear /= static_cast<std::size_t>(n_);
  }
  return p;
}

bool GridFunction::contains(const LatticePoint& p) const {
  if (static_cast<int>(p.size()) != d_) return false;
  return std::all_of(p.begin(), p.end(), [&](int i) { return i >= 0 && i < n_; });
}

std::vector<double> GridFunction::coordinates(const LatticePoint& p) const {
  std::vector<double> x(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = static_cast<double>(p[i]) / (n_ - 1);
  return x;
}

GridFunction make_grid_function(int d, int n, std::span<const double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return GridFunction(d, n, std::move(v));
}

// ---------------------------------------------------------------------------
// Cubes and intervals
// ---------------------------------------------------------------------------

bool LatticeCube::fits(int d, int n) const {
  if (dim() != d || side < 1) return false;
  return std::all_of(origin.begin(), origin.end(), [&](int o) { return o >= 0 && o + side <= n - 1; });
}

bool LatticeCube::contains(const LatticePoint& p) const {
  if (p.size() != origin.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < origin[i] || p[i] > origin[i] + side) return false;
  return true;
}

bool LatticeCube::contains(const LatticeCube& other) const {
  if (other.origin.size() != origin.size()) return false;
  for (std::size_t i = 0; i < origin.size(); ++i)
    if (other.origin[i] < origin[i] || other.origin[i] + other.side > origin[i] + side) return false;
  return true;
}

double LatticeCube::volume(int n) const {
  return std::pow(static_cast<double>(side) / (n - 1), dim());
}

std::int64_t LatticeCube::cell_count() const {
  std::int64_t c = 1;
  for (int i = 0; i < dim(); ++i) c *= side;
  return c;
}

std::vector<double> LatticeCube::center(int n) const {
  std::vector<double> c(origin.size());
  for (std::size_t i = 0; i < origin.size(); ++i) c[i] = (origin[i] + 0.5 * side) / (n - 1);
  return c;
}

std::size_t LatticeCube::point_count() const { return ipow(static_cast<std::size_t>(side + 1), dim()); }

LatticeCube whole_grid_cube(const GridFunction& f) {
  return LatticeCube{LatticePoint(static_cast<std::size_t>(f.dim()), 0), f.points_per_axis() - 1};
}

std::string to_string(const LatticeCube& q) {
  std::ostringstream os;
  os << "cube(origin=[";
  for (std::size_t i = 0; i < q.origin.size(); ++i) os << (i ? "," : "") << q.origin[i];
  os << "], side=" << q.side << ")";
  return os.str();
}

std::vector<LatticePoint> cube_points(const LatticeCube& q) {
  std::vector<LatticePoint> pts;
  pts.reserve(q.point_count());
  LatticePoint hi = q.origin;
  for (auto& h : hi) h += q.side;
  LatticePoint p = q.origin;
  do {
    pts.push_back(p);
  } while (advance(p, q.origin, hi));
  return pts;
}

bool LatticeInterval::is_nontrivial() const {
  if (lower.size() != upper.size() || lower.empty()) return false;
  bool any = false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (upper[i] < lower[i]) return false;
    any = any || upper[i] > lower[i];
  }
  return any;
}

bool LatticeInterval::is_full_dimensional() const {
  if (lower.size() != upper.size() || lower.empty()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (upper[i] <= lower[i]) return false;
  return true;
}

double Packing::total_volume(int n) const {
  double v = 0.0;
  for (const auto& q : cubes) v += q.volume(n);
  return v;
}

AxisSubset make_axis_subset(std::vector<int> axes, int d) {
  if (axes.empty()) throw InvalidArgument("axis subset must be nonempty");
  std::sort(axes.begin(), axes.end());
  if (std::adjacent_find(axes.begin(), axes.end()) != axes.end())
    throw InvalidArgument("axis subset has duplicate axes");
  if (axes.front() < 0 || axes.back() >= d) throw InvalidArgument("axis subset: axis out of range");
  return AxisSubset{std::move(axes)};
}

bool is_packing(std::span<const LatticeCube> cubes) {
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    for (std::size_t j = i + 1; j < cubes.size(); ++j) {
      const auto& a = cubes[i];
      const auto& b = cubes[j];
      if (a.origin.size() != b.origin.size()) return false;
      bool disjoint = false;
      for (std::size_t ax = 0; ax < a.origin.size() && !disjoint; ++ax) {
        // half-open [o, o + side) on each axis
        disjoint = a.origin[ax] + a.side <= b.origin[ax] || b.origin[ax] + b.side <= a.origin[ax];
      }
      if (!disjoint) return false;
    }
  }
  return true;
}

bool is_packing(const Packing& p) { return is_packing(std::span<const LatticeCube>(p.cubes)); }

std::vector<LatticeCube> enumerate_cubes(int d, int n, int min_side) {
  if (d < 1 || n < 2) throw InvalidArgument("enumerate_cubes: invalid grid shape");
  if (min_side < 1 || min_side > n - 1) throw InvalidArgument("enumerate_cubes: min_side out of range [1, n-1]");
  std::vector<LatticeCube> out;
  LatticePoint lo(static_cast<std::size_t>(d), 0);
  LatticePoint hi(static_cast<std::size_t>(d), n - 2);
  LatticePoint o = lo;
  do {
    const int room = n - 1 - *std::max_element(o.begin(), o.end());
    for (int s = min_side; s <= room; ++s) out.push_back(LatticeCube{o, s});
  } while (advance(o, lo, hi));
  return out;
}

std::vector<LatticeCube> enumerate_cubes(const GridFunction& grid, int min_side) {
  return enumerate_cubes(grid.dim(), grid.points_per_axis(), min_side);
}

// ---------------------------------------------------------------------------
// Cell sets
// ---------------------------------------------------------------------------

std::size_t cell_count(int d, int n) { return ipow(static_cast<std::size_t>(n - 1), d); }

namespace {

CellSet box_cells(const LatticePoint& lo_cell, const LatticePoint& hi_cell, int n) {
  const int d = static_cast<int>(lo_cell.size());
  CellSet s(cell_count(d, n));
  LatticePoint c = lo_cell;
  do {
    std::size_t lin = 0;
    for (int a = 0; a < d; ++a) lin = lin * static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(c[static_cast<std::size_t>(a)]);
    s.set(lin);
  } while (advance(c, lo_cell, hi_cell));
  return s;
}

}  // namespace

CellSet cells_of(const LatticeCube& q, int n) {
  LatticePoint hi = q.origin;
  for (auto& h : hi) h += q.side - 1;
  return box_cells(q.origin, hi, n);
}

CellSet cells_of(const LatticeInterval& box, int n) {
  if (!box.is_full_dimensional()) return CellSet(cell_count(box.dim(), n));
  LatticePoint hi = box.upper;
  for (auto& h : hi) h -= 1;
  return box_cells(box.lower, hi, n);
}

void check_exhaustive_guard(int d, int n, bool allow_large, const char* who) {
  const std::size_t cells = cell_count(d, n);
  if (cells > kExhaustiveCellCeiling) {
    std::ostringstream os;
    os << who << ": grid has " << cells << " cells, above the hard ceiling of " << kExhaustiveCellCeiling
       << " for exhaustive search; use --method dyadic or local_search";
    throw GuardViolation(os.str());
  }
  if (cells > kExhaustiveCellGuard && !allow_large) {
    std::ostringstream os;
    os << who << ": grid has (n-1)^d = " << cells << " cells, above the exhaustive-search guard of "
       << kExhaustiveCellGuard << "; use --method dyadic, or pass the override flag";
    throw GuardViolation(os.str());
  }
}

// ---------------------------------------------------------------------------
// Packing enumeration (preorder DFS over increasing cube indices)
// ---------------------------------------------------------------------------

PackingEnumerator::PackingEnumerator(const GridFunction& grid, PackingEnumOptions opts)
    : PackingEnumerator(grid.dim(), grid.points_per_axis(), opts) {}

PackingEnumerator::PackingEnumerator(int d, int n, PackingEnumOptions opts)
    : cubes_(enumerate_cubes(d, n, opts.min_side)), max_card_(opts.max_cardinality) {
  check_exhaustive_guard(d, n, opts.allow_large, "enumerate_packings");
  cells_ = cell_count(d, n);
  masks_.reserve(cubes_.size());
  for (const auto& q : cubes_) masks_.push_back(cells_of(q, n));
}

std::optional<Packing> PackingEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    frames_.push_back(Frame{0});
    return Packing{};
  }
  while (!frames_.empty()) {
    Frame& top = frames_.back();
    const bool at_cap = max_card_ >= 0 && static_cast<int>(chosen_.size()) >= max_card_;
    std::size_t j = top.next_candidate;
    if (!at_cap) {
      const CellSet* occ = occupied_.empty() ? nullptr : &occupied_.back();
      while (j < cubes_.size() && occ && masks_[j].intersects(*occ)) ++j;
    } else {
      j = cubes_.size();
    }
    if (j < cubes_.size()) {
      top.next_candidate = j + 1;
      CellSet occ = occupied_.empty() ? CellSet(cells_) : occupied_.back();
      occ |= masks_[j];
      chosen_.push_back(j);
      occupied_.push_back(std::move(occ));
      frames_.push_back(Frame{j + 1});
      Packing p;
      p.cubes.reserve(chosen_.size());
      for (auto c : chosen_) p.cubes.push_back(cubes_[c]);
      return p;
    }
    frames_.pop_back();
    if (!chosen_.empty()) {
      chosen_.pop_back();
      occupied_.pop_back();
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<Packing> enumerate_packings(const GridFunction& grid, PackingEnumOptions opts) {
  PackingEnumerator it(grid, opts);
  std::vector<Packing> out;
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

GridFunction restrict_to_cube(const GridFunction& f, const LatticeCube& q) {
  if (!q.fits(f.dim(), f.points_per_axis())) throw InvalidArgument("restrict_to_cube: cube outside grid");
  const auto pts = cube_points(q);
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(pts[i]);
  return GridFunction(f.dim(), q.side + 1, std::move(v));
}

}  // namespace latvar
