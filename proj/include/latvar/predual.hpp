#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latvar/grid.hpp"
#include "latvar/variation.hpp"

namespace latvar {

/// Finitely supported signed weights on lattice points.
using PointWeights = std::map<LatticePoint, double>;

struct Atom {
  LatticeCube support_cube;
  PointWeights weights;
};

struct AtomDiagnostics {
  bool valid = false;
  bool support_ok = false;
  bool l1_ok = false;
  bool moments_ok = false;
  double l1_norm = 0.0;
  double max_moment = 0.0;  ///< max |sum x^alpha w(x)| over |alpha| <= k - 1
  std::vector<std::string> problems;
};

/// Support inside the cube, sum |w| <= 1, and vanishing moments against the
/// global monomials x^alpha, |alpha| <= k - 1, to 1e-12. Coordinates are
/// x = index / (n - 1).
AtomDiagnostics validate_atom(const Atom& atom, int k, int n);

/// b = sum_Q c_Q a_Q; atoms[i] lives on packing.cubes[i].
struct Chain {
  Packing packing;
  std::vector<Atom> atoms;
  std::vector<double> coefficients;
};

/// Conjugate exponent p' with 1/p + 1/p' = 1 (infinity for p = 1).
double conjugate_exponent(double p);

/// (sum |c_Q|^{p'})^{1/p'}, max |c_Q| when p' is infinite.
double chain_norm(const Chain& chain, double p);

/// Structural check: one atom per cube, atoms sit on their cubes and are valid.
AtomDiagnostics validate_chain(const Chain& chain, int k, int n);

/// The function b on the d-dimensional n-point grid.
GridFunction chain_function(const Chain& chain, int d, int n);

/// delta_x - sum_{s in S} c_x(s) delta_s with m(x) = sum_s c_x(s) m(s) for
/// every polynomial of total degree <= k - 1. S must have exactly
/// dim P_{k-1} points and a well-conditioned interpolation matrix (reciprocal
/// condition number >= 1e-9). Entries with |weight| <= 1e-15 are dropped.
PointWeights delta_correction(const LatticePoint& x, const std::vector<LatticePoint>& points, int k, int n);

/// max |sum_x x^alpha g(x)| over |alpha| <= k - 1.
double max_moment(const GridFunction& g, int k);

struct UNormOptions {
  int random_witnesses = 64;
  std::uint64_t seed = 0;
  std::size_t max_support = 6;
  bool allow_large = false;
};

struct UNormBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Chain> witness_decomposition;
  GridFunction witness_function{1, 2, Eigen::VectorXd::Zero(2)};
  std::string upper_source;
  std::string lower_source;
};

/// Certified interval for the predual norm of a finitely supported g with
/// vanishing moments through degree k - 1. The upper end is a concrete
/// decomposition into chains, the lower end max |<f, g>| / var(f) over a
/// witness family with exact (brute force) variation.
UNormBounds u_norm_bounds(const GridFunction& g, const VariationParams& params, const UNormOptions& opts = {});

/// sum over the witness decomposition of chain norms, recomputed.
double decomposition_norm(const std::vector<Chain>& chains, double p);

struct DualityReport {
  double pairing = 0.0;     ///< |sum f b|
  double chain_norm = 0.0;  ///< [b]_{p'}
  double variation = 0.0;   ///< brute-force var(f)
  double rhs = 0.0;         ///< chain_norm * variation
  double slack = 0.0;       ///< rhs - pairing
  double tolerance = 0.0;
  bool holds = true;
};

/// Checks |sum f b| <= [b]_{p'} var(f) + 1e-10 * scale.
DualityReport duality_check(const GridFunction& f, const Chain& chain, const VariationParams& params,
                            bool allow_large = false);

}  // namespace latvar
