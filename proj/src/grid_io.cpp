#include "latvar/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace latvar {

GridFunction grid_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("values"))
    throw InvalidArgument("grid JSON must be an object with keys d, n, values");
  if (!j["d"].is_number_integer() || !j["n"].is_number_integer())
    throw InvalidArgument("grid JSON: d and n must be integers");
  if (!j["values"].is_array()) throw InvalidArgument("grid JSON: values must be an array");
  std::vector<double> vals;
  vals.reserve(j["values"].size());
  for (const auto& v : j["values"]) {
    if (!v.is_number()) throw InvalidArgument("grid JSON: values must be numbers");
    vals.push_back(v.get<double>());
  }
  return make_grid_function(j["d"].get<int>(), j["n"].get<int>(), vals);
}

nlohmann::json grid_to_json(const GridFunction& f) {
  nlohmann::json j;
  j["d"] = f.dim();
  j["n"] = f.points_per_axis();
  std::vector<double> vals(f.values().data(), f.values().data() + f.values().size());
  j["values"] = vals;
  return j;
}

namespace {

std::vector<double> split_numbers(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = cell.find_last_not_of(" \t\r");
    const std::string tok = cell.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      std::ostringstream os;
      os << "CSV grid: cannot parse '" << tok << "' on line " << line_no;
      throw InvalidArgument(os.str());
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

GridFunction grid_from_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_numbers(line, line_no));
  }
  if (rows.empty()) throw InvalidArgument("CSV grid: no data");
  if (rows.size() == 1) {
    const int n = static_cast<int>(rows[0].size());
    return make_grid_function(1, n, rows[0]);
  }
  const bool column = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.size() == 1; });
  if (column) {
    std::vector<double> vals;
    for (const auto& r : rows) vals.push_back(r[0]);
    return make_grid_function(1, static_cast<int>(vals.size()), vals);
  }
  const std::size_t n = rows.size();
  std::vector<double> vals;
  vals.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InvalidArgument("CSV grid: a d=2 grid must be a square n x n matrix");
    vals.insert(vals.end(), r.begin(), r.end());
  }
  return make_grid_function(2, static_cast<int>(n), vals);
}

GridFunction parse_grid(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b != std::string_view::npos && text[b] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgument(std::string("grid JSON parse error: ") + e.what());
    }
    return grid_from_json(j);
  }
  return grid_from_csv(text);
}

GridFunction load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open grid file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

nlohmann::json cube_to_json(const LatticeCube& q) {
  return nlohmann::json{{"origin", q.origin}, {"side", q.side}};
}

LatticeCube cube_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("origin") || !j.contains("side"))
    throw InvalidArgument("cube JSON must have origin and side");
  return LatticeCube{j["origin"].get<std::vector<int>>(), j["side"].get<int>()};
}

nlohmann::json packing_to_json(const Packing& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& q : p.cubes) arr.push_back(cube_to_json(q));
  return arr;
}

}  // namespace latvar
