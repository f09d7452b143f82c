#pragma once

#include <compare>
#include <numeric>
#include <vector>

namespace latvar {

/// Nonnegative exponents per axis; order() is the total degree.
struct MultiIndex {
  std::vector<int> entries;

  auto operator<=>(const MultiIndex&) const = default;
  int dim() const { return static_cast<int>(entries.size()); }
  int order() const { return std::accumulate(entries.begin(), entries.end(), 0); }
};

/// All alpha in Z_+^d with |alpha| == degree, in descending lexicographic
/// order: (degree, 0, ..., 0) first, (0, ..., 0, degree) last.
std::vector<MultiIndex> multi_indices_of_order(int d, int degree);

/// All alpha with |alpha| <= max_degree, graded: by order, then descending
/// lexicographic within an order. Empty when max_degree < 0.
std::vector<MultiIndex> multi_indices_up_to(int d, int max_degree);

/// dim P^d_{max_degree} = C(max_degree + d, d).
int polynomial_space_dim(int d, int max_degree);

MultiIndex unit_multi_index(int d, int axis, int order);

}  // namespace latvar
