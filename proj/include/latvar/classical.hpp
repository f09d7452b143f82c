#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latvar/grid.hpp"

namespace latvar {

/// Alternating corner sum over the box I: the corner taking every upper
/// coordinate has sign +1, each switch to a lower coordinate flips the sign.
/// Zero when I is degenerate on some axis.
double vitali_deviation(const GridFunction& f, const LatticeInterval& interval);

enum class VitaliMethod { brute, grid_partition, local_search };

std::string to_string(VitaliMethod m);

struct IntervalVariationResult {
  double value = 0.0;
  std::vector<LatticeInterval> optimizer;
  VitaliMethod method = VitaliMethod::grid_partition;
  bool is_exact = false;
};

/// Supremum over families of non-overlapping full-dimensional lattice boxes of
/// sum |vitali_deviation|. grid_partition is exact (sum over unit cells);
/// brute is a branch and bound under the exhaustive guard; local_search is a
/// lower bound.
IntervalVariationResult vitali_variation(const GridFunction& f, VitaliMethod method = VitaliMethod::grid_partition,
                                         bool allow_large = false, int budget = 1000);

/// The |omega|-dimensional function of the omega coordinates with the others
/// frozen at `anchor`.
GridFunction partial_function(const GridFunction& f, const LatticePoint& anchor, const AxisSubset& omega);

/// (n-1, ..., n-1), the all-ones corner.
LatticePoint default_anchor(int d, int n);

/// Sum over nonempty omega of the Vitali variation of partial_function(f, anchor, omega).
double hardy_krause_variation(const GridFunction& f, std::optional<LatticePoint> anchor = std::nullopt);

/// Sum over axes of the lattice average of 1-d Jordan variations of the line
/// sections parallel to that axis.
double tonelli_variation(const GridFunction& f);

/// d = 1: sum of absolute consecutive differences.
double jordan_variation(const GridFunction& f);

/// d = 1: sup over partitions of (sum |f(t_i) - f(t_{i-1})|^p)^{1/p}, by an
/// O(n^2) dynamic program over interval oscillations.
double wiener_variation(const GridFunction& f, double p);

}  // namespace latvar
