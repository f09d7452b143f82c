#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "latvar/grid.hpp"
#include "latvar/multi_index.hpp"

namespace latvar {

/// Polynomial of total degree <= degree_cap written in the local monomials
/// ((x - center) / scale)^alpha.
class Polynomial {
 public:
  Polynomial(int d, int degree_cap, std::vector<double> center, double scale);
  /// Zero polynomial in the global basis (center 0, scale 1).
  Polynomial(int d, int degree_cap);

  int dim() const { return d_; }
  int degree_cap() const { return degree_cap_; }
  const std::vector<double>& center() const { return center_; }
  double scale() const { return scale_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  void set_coefficient(const MultiIndex& alpha, double c);
  double coefficient(const MultiIndex& alpha) const;

  double operator()(std::span<const double> x) const;
  double at(const GridFunction& shape, const LatticePoint& p) const;

  /// Samples on the lattice of an n-point-per-axis grid.
  GridFunction sample(int n) const;

 private:
  int d_;
  int degree_cap_;
  std::vector<double> center_;
  double scale_;
  std::map<MultiIndex, double> terms_;
};

double local_monomial(const MultiIndex& alpha, std::span<const double> x, std::span<const double> center,
                      double scale);

/// rows: points, columns: basis functions.
Eigen::MatrixXd local_basis_matrix(const std::vector<std::vector<double>>& points,
                                   const std::vector<MultiIndex>& basis, std::span<const double> center,
                                   double scale);

}  // namespace latvar
