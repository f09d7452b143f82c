#pragma once

#include <optional>
#include <string>

#include "latvar/grid.hpp"

namespace latvar {

/// Per-cube weight w(f; Q) inside the packing sum.
enum class WeightKind { E_k, osc_k };

struct VariationParams {
  int k = 1;
  double p = 1.0;
  WeightKind weight = WeightKind::E_k;

  /// s = d / p.
  double smoothness(int d) const { return d / p; }
  /// Throws InvalidArgument unless k >= 1 and 1 <= p < infinity.
  void validate() const;
};

enum class VariationMethod { brute, dyadic, local_search };

std::string to_string(WeightKind w);
std::string to_string(VariationMethod m);
WeightKind weight_from_string(const std::string& s);

struct VariationResult {
  double value = 0.0;
  Packing optimizer;
  VariationMethod method = VariationMethod::brute;
  bool is_exact = false;
};

/// E_k(f; Q) or osc_k(f; Q) depending on params.weight.
double cube_weight(const GridFunction& f, const LatticeCube& q, const VariationParams& params);

/// (sum_{Q in pi} w(f; Q)^p)^{1/p}. Throws if pi is not a packing of the grid.
double packing_objective(const GridFunction& f, const Packing& pi, const VariationParams& params);

/// Exact supremum over all lattice packings by branch and bound. Among
/// optimal packings the one with the fewest cubes wins, then the
/// lexicographically smallest sorted cube list.
VariationResult variation_bruteforce(const GridFunction& f, const VariationParams& params, bool allow_large = false);

/// Exact supremum over packings whose cubes lie inside the box `region`
/// (the variation of f relative to that sub-region).
VariationResult variation_bruteforce_region(const GridFunction& f, const VariationParams& params,
                                            const LatticeInterval& region, bool allow_large = false);

/// True when n - 1 is a power of two.
bool is_dyadic_grid(int n);

/// Best packing made of dyadic cubes (recursive bisection of the whole grid).
/// A lower bound for the full supremum. Requires is_dyadic_grid(n).
VariationResult variation_dyadic(const GridFunction& f, const VariationParams& params);

/// Hill climbing from `seed` over the moves add, remove, replace, grow and
/// shrink, scanned in that order with first improvement accepted. `budget`
/// bounds the number of accepted moves.
VariationResult variation_local_search(const GridFunction& f, const VariationParams& params, const Packing& seed,
                                       int budget = 1000);

/// Supremum over packings whose cubes all have volume <= mesh_cap. Exact
/// under the exhaustive guard, otherwise a dyadic/local-search lower bound.
double restricted_variation(const GridFunction& f, const VariationParams& params, double mesh_cap);
VariationResult restricted_variation_detailed(const GridFunction& f, const VariationParams& params, double mesh_cap,
                                              bool allow_large = false);

/// Supremum over packings with total volume <= volume_cap.
double ac_modulus(const GridFunction& f, const VariationParams& params, double volume_cap);
VariationResult ac_modulus_detailed(const GridFunction& f, const VariationParams& params, double volume_cap,
                                    bool allow_large = false);

}  // namespace latvar
