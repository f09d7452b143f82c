#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "latvar/grid.hpp"

namespace latvar {

/// {"d": int, "n": int, "values": [row-major reals]}
GridFunction grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridFunction& f);

/// One row of n values (d = 1), one value per line (d = 1), or an n x n
/// matrix (d = 2, row index is axis 0).
GridFunction grid_from_csv(std::string_view text);

/// Dispatches on content: a leading '{' means JSON, anything else CSV.
GridFunction parse_grid(std::string_view text);
GridFunction load_grid(const std::string& path);

nlohmann::json cube_to_json(const LatticeCube& q);
LatticeCube cube_from_json(const nlohmann::json& j);
nlohmann::json packing_to_json(const Packing& p);

}  // namespace latvar
