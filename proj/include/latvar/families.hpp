#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latvar/grid.hpp"

namespace latvar {

struct FamilyParams {
  int d = 1;
  int n = 5;
  int degree = 1;         ///< polynomial: total degree cap
  double exponent = 0.5;  ///< lacunary: decay 2^{-j s}
  int terms = 4;          ///< lacunary: number of frequencies
  int support = 2;        ///< point-masses: number of support points
  /// point-masses: interior points at pairwise Chebyshev distance >= 2.
  bool separated = true;
};

/// Registered names: polynomial, monotone-walk, lacunary, point-masses,
/// separable, checkerboard, uniform.
const std::vector<std::string>& family_names();
bool is_family(const std::string& name);

/// Deterministic in (name, params, seed). Throws InvalidArgument for an
/// unknown family or parameters the family cannot honour.
GridFunction generate(const std::string& family, const FamilyParams& params, std::uint64_t seed);

}  // namespace latvar
