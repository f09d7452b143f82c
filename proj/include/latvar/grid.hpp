#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "latvar/errors.hpp"

namespace latvar {

using LatticePoint = std::vector<int>;

// ============================================================================
// GridFunction: real samples on the uniform lattice {0, 1/(n-1), ..., 1}^d
// ============================================================================

/// Values are stored row-major: axis 0 is the slowest index. The lattice
/// point (i_1, ..., i_d) sits at coordinates (i_1/(n-1), ..., i_d/(n-1)).
class GridFunction {
 public:
  GridFunction(int d, int n, Eigen::VectorXd values);

  int dim() const { return d_; }
  int points_per_axis() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  std::vector<int> dims() const { return std::vector<int>(d_, n_); }
  const Eigen::VectorXd& values() const { return values_; }

  double operator[](std::size_t linear) const { return values_[static_cast<Eigen::Index>(linear)]; }
  double operator()(const LatticePoint& p) const { return (*this)[linear_index(p)]; }

  std::size_t linear_index(const LatticePoint& p) const;
  LatticePoint point(std::size_t linear) const;
  bool contains(const LatticePoint& p) const;

  /// Lattice spacing 1/(n-1).
  double step() const { return 1.0 / (n_ - 1); }
  std::vector<double> coordinates(const LatticePoint& p) const;

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  /// Row-major strides, stride(d-1) == 1.
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

 private:
  int d_;
  int n_;
  Eigen::VectorXd values_;
  std::vector<std::size_t> strides_;
};

GridFunction make_grid_function(int d, int n, std::span<const double> values);

/// Samples fn(coordinates) on the lattice.
template <typename Fn>
GridFunction sample_grid(int d, int n, Fn&& fn) {
  if (d < 1 || n < 2) throw InvalidArgument("sample_grid: need d >= 1 and n >= 2");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(total));
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    for (int a = d - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = static_cast<double>(rem % static_cast<std::size_t>(n)) / (n - 1);
      rem /= static_cast<std::size_t>(n);
    }
    v[static_cast<Eigen::Index>(lin)] = fn(std::as_const(x));
  }
  return GridFunction(d, n, std::move(v));
}

// ============================================================================
// Cubes, intervals, packings
// ============================================================================

/// Closed axis-aligned cube [origin, origin + side]^d in lattice steps.
struct LatticeCube {
  LatticePoint origin;
  int side = 1;

  auto operator<=>(const LatticeCube&) const = default;

  int dim() const { return static_cast<int>(origin.size()); }
  bool fits(int d, int n) const;
  bool contains(const LatticePoint& p) const;
  bool contains(const LatticeCube& other) const;
  /// Continuous volume (side/(n-1))^d.
  double volume(int n) const;
  /// Number of unit lattice cells covered, side^d.
  std::int64_t cell_count() const;
  std::vector<double> center(int n) const;
  std::size_t point_count() const;
};

LatticeCube whole_grid_cube(const GridFunction& f);
std::string to_string(const LatticeCube& q);

/// Lattice points of q in row-major order.
std::vector<LatticePoint> cube_points(const LatticeCube& q);

/// Box [lower, upper] in lattice indices.
struct LatticeInterval {
  LatticePoint lower;
  LatticePoint upper;

  auto operator<=>(const LatticeInterval&) const = default;

  int dim() const { return static_cast<int>(lower.size()); }
  bool is_nontrivial() const;
  bool is_full_dimensional() const;
};

struct Packing {
  std::vector<LatticeCube> cubes;

  auto operator<=>(const Packing&) const = default;
  std::size_t size() const { return cubes.size(); }
  bool empty() const { return cubes.empty(); }
  double total_volume(int n) const;
};

/// Sorted duplicate-free nonempty subset of {0, ..., d-1}.
struct AxisSubset {
  std::vector<int> axes;
  auto operator<=>(const AxisSubset&) const = default;
};

AxisSubset make_axis_subset(std::vector<int> axes, int d);

/// True iff the half-open index boxes [origin, origin + side) are pairwise
/// disjoint.
bool is_packing(std::span<const LatticeCube> cubes);
bool is_packing(const Packing& p);

/// All cubes with side >= min_side inside the grid, ordered by (origin, side).
std::vector<LatticeCube> enumerate_cubes(const GridFunction& grid, int min_side = 1);
std::vector<LatticeCube> enumerate_cubes(int d, int n, int min_side = 1);

// ============================================================================
// Cell sets and packing enumeration
// ============================================================================

/// Bitset over the (n-1)^d unit cells of the grid.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(std::size_t cells) : words_((cells + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool intersects(const CellSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  CellSet& operator|=(const CellSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  /// Requires o to be a subset of *this.
  CellSet& remove(const CellSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

 private:
  std::vector<std::uint64_t> words_;
};

std::size_t cell_count(int d, int n);
CellSet cells_of(const LatticeCube& q, int n);
CellSet cells_of(const LatticeInterval& box, int n);

/// Default size guard for exhaustive methods: (n-1)^d <= 16 cells.
inline constexpr std::size_t kExhaustiveCellGuard = 16;
/// Hard ceiling even with an override.
inline constexpr std::size_t kExhaustiveCellCeiling = 64;

void check_exhaustive_guard(int d, int n, bool allow_large, const char* who);

struct PackingEnumOptions {
  int min_side = 1;
  int max_cardinality = -1;  ///< negative: unbounded
  bool allow_large = false;
};

/// Yields every packing of cubes (side >= min_side) with cardinality at most
/// max_cardinality exactly once, starting with the empty packing, in
/// lexicographic order of the sorted cube lists.
class PackingEnumerator {
 public:
  PackingEnumerator(const GridFunction& grid, PackingEnumOptions opts = {});
  PackingEnumerator(int d, int n, PackingEnumOptions opts = {});

  std::optional<Packing> next();
  const std::vector<LatticeCube>& cubes() const { return cubes_; }

 private:
  struct Frame {
    std::size_t next_candidate;
  };

  std::vector<LatticeCube> cubes_;
  std::vector<CellSet> masks_;
  int max_card_;
  std::vector<std::size_t> chosen_;
  std::vector<CellSet> occupied_;  // occupancy after each chosen cube
  std::vector<Frame> frames_;
  bool started_ = false;
  bool done_ = false;
  std::size_t cells_ = 0;
};

std::vector<Packing> enumerate_packings(const GridFunction& grid, PackingEnumOptions opts = {});

/// Grid function on q's lattice points (side + 1 per axis), rescaled to the
/// unit cube.
GridFunction restrict_to_cube(const GridFunction& f, const LatticeCube& q);

}  // namespace latvar
