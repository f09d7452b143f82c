#include "latvar/polynomial.hpp"

#include <cmath>

namespace latvar {

// ---------------------------------------------------------------------------
// Multi-indices
// ---------------------------------------------------------------------------

namespace {

void fill_order(int d, int axis, int remaining, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (axis == d - 1) {
    cur[static_cast<std::size_t>(axis)] = remaining;
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[static_cast<std::size_t>(axis)] = v;
    fill_order(d, axis + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int d, int degree) {
  if (d < 1) throw InvalidArgument("multi-index dimension must be >= 1");
  std::vector<MultiIndex> out;
  if (degree < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  fill_order(d, 0, degree, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int d, int max_degree) {
  std::vector<MultiIndex> out;
  for (int deg = 0; deg <= max_degree; ++deg) {
    auto part = multi_indices_of_order(d, deg);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

int polynomial_space_dim(int d, int max_degree) {
  if (max_degree < 0) return 0;
  long r = 1;
  for (int i = 1; i <= d; ++i) r = r * (max_degree + i) / i;
  return static_cast<int>(r);
}

MultiIndex unit_multi_index(int d, int axis, int order) {
  MultiIndex m{std::vector<int>(static_cast<std::size_t>(d), 0)};
  m.entries.at(static_cast<std::size_t>(axis)) = order;
  return m;
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

Polynomial::Polynomial(int d, int degree_cap, std::vector<double> center, double scale)
    : d_(d), degree_cap_(degree_cap), center_(std::move(center)), scale_(scale) {
  if (d < 1) throw InvalidArgument("polynomial: dimension must be >= 1");
  if (static_cast<int>(center_.size()) != d) throw InvalidArgument("polynomial: center has wrong dimension");
  if (!(scale_ > 0.0)) throw InvalidArgument("polynomial: scale must be positive");
}

Polynomial::Polynomial(int d, int degree_cap)
    : Polynomial(d, degree_cap, std::vector<double>(static_cast<std::size_t>(d), 0.0), 1.0) {}

void Polynomial::set_coefficient(const MultiIndex& alpha, double c) {
  if (alpha.dim() != d_) throw InvalidArgument("polynomial: multi-index dimension mismatch");
  if (alpha.order() > degree_cap_) throw InvalidArgument("polynomial: term exceeds the degree cap");
  if (c == 0.0)
    terms_.erase(alpha);
  else
    terms_[alpha] = c;
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double local_monomial(const MultiIndex& alpha, std::span<const double> x, std::span<const double> center,
                      double scale) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.entries.size(); ++i) {
    const double t = (x[i] - center[i]) / scale;
    for (int e = 0; e < alpha.entries[i]; ++e) v *= t;
  }
  return v;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw InvalidArgument("polynomial: point has wrong dimension");
  double s = 0.0;
  for (const auto& [alpha, c] : terms_) s += c * local_monomial(alpha, x, center_, scale_);
  return s;
}

double Polynomial::at(const GridFunction& shape, const LatticePoint& p) const {
  const auto x = shape.coordinates(p);
  return (*this)(x);
}

GridFunction Polynomial::sample(int n) const {
  return sample_grid(d_, n, [this](const std::vector<double>& x) { return (*this)(x); });
}

Eigen::MatrixXd local_basis_matrix(const std::vector<std::vector<double>>& points,
                                   const std::vector<MultiIndex>& basis, std::span<const double> center,
                                   double scale) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < points.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = local_monomial(basis[c], points[r], center, scale);
  return m;
}

}  // namespace latvar
