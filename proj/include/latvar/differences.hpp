#pragma once

#include <cmath>
#include <vector>

#include "latvar/grid.hpp"
#include "latvar/multi_index.hpp"

namespace latvar {

/// Integer lattice steps per axis; h = steps / (n - 1) in coordinates.
struct StepVector {
  std::vector<int> steps;
};

/// sum_{j=0}^{k} (-1)^{k-j} C(k,j) f(x + j h), compensated summation.
double finite_difference(const GridFunction& f, const LatticePoint& x, const StepVector& h, int k);

/// max |Delta_h^k f(x)| over lattice x and every nonzero integer step h with
/// x, x + h, ..., x + k h in q. Zero when no such pair exists.
double osc_k(const GridFunction& f, const LatticeCube& q, int k);

/// As osc_k with h restricted to multiples of the axis unit vector.
double osc_directional(const GridFunction& f, const LatticeCube& q, int k, int axis);

/// max |prod_i Delta_{h_i e_i}^{alpha_i} f(x)| over x and per-axis steps with
/// x_i + alpha_i h_i inside q; axes with alpha_i = 0 contribute the identity.
double osc_mixed(const GridFunction& f, const LatticeCube& q, const MultiIndex& alpha);

/// Binomial C(k, j) as a double.
double binomial(int k, int j);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace latvar
