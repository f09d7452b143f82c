#include "latvar/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latvar/classical.hpp"
#include "latvar/differences.hpp"
#include "latvar/families.hpp"
#include "latvar/grid_io.hpp"
#include "latvar/local_approx.hpp"
#include "latvar/predual.hpp"
#include "latvar/suite.hpp"
#include "latvar/variation.hpp"

namespace latvar {

using nlohmann::json;

namespace {

// Grid source shared by the computing subcommands: a file (JSON/CSV, "-" for
// stdin) or a generated family sample.
struct GridSource {
  std::string input;
  std::string family;
  int d = 1;
  int n = 5;
  std::uint64_t seed = 0;
  int degree = 1;
  double exponent = 0.5;
  int terms = 4;
  int support = 2;

  void attach(CLI::App* app) {
    app->add_option("input", input, "grid file (JSON or CSV); '-' reads stdin");
    app->add_option("--family", family, "generate the grid from a family instead of reading a file");
    app->add_option("--d", d, "dimension for --family")->check(CLI::Range(1, 3));
    app->add_option("--n", n, "points per axis for --family")->check(CLI::Range(2, 1025));
    app->add_option("--seed", seed, "seed for --family");
    app->add_option("--degree", degree, "polynomial family degree");
    app->add_option("--exponent", exponent, "lacunary family exponent");
    app->add_option("--terms", terms, "lacunary family terms");
    app->add_option("--support", support, "point-masses family support size");
  }

  GridFunction load(std::istream& in) const {
    if (!family.empty()) {
      if (!input.empty()) throw InvalidArgument("give either an input file or --family, not both");
      FamilyParams fp;
      fp.d = d;
      fp.n = n;
      fp.degree = degree;
      fp.exponent = exponent;
      fp.terms = terms;
      fp.support = support;
      return generate(family, fp, seed);
    }
    if (input.empty()) throw InvalidArgument("missing input: give a grid file or --family");
    if (input == "-") {
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      return parse_grid(text);
    }
    return load_grid(input);
  }
};

struct CubeOption {
  std::vector<int> origin;
  int side = 0;

  void attach(CLI::App* app) {
    app->add_option("--origin", origin, "cube origin in lattice indices (default: whole grid)")->delimiter(',');
    app->add_option("--side", side, "cube side in lattice steps");
  }

  LatticeCube resolve(const GridFunction& f) const {
    if (origin.empty() && side == 0) return whole_grid_cube(f);
    LatticeCube q{origin.empty() ? LatticePoint(static_cast<std::size_t>(f.dim()), 0) : origin,
                  side == 0 ? f.points_per_axis() - 1 : side};
    if (!q.fits(f.dim(), f.points_per_axis())) throw InvalidArgument("cube " + to_string(q) + " does not fit the grid");
    return q;
  }
};

json params_json(const VariationParams& p, int d) {
  return json{{"k", p.k}, {"p", p.p}, {"weight", to_string(p.weight)}, {"d", d}};
}

json points_json(const std::vector<LatticePoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(p);
  return a;
}

json chain_json(const Chain& c) {
  json atoms = json::array();
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    json w = json::array();
    for (const auto& [pt, val] : c.atoms[i].weights) w.push_back(json{{"point", pt}, {"weight", val}});
    atoms.push_back(json{{"cube", cube_to_json(c.atoms[i].support_cube)}, {"coefficient", c.coefficients[i]}, {"weights", w}});
  }
  return atoms;
}

Atom atom_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cube") || !j.contains("weights"))
    throw InvalidArgument("atom JSON must have 'cube' and 'weights'");
  Atom a{cube_from_json(j.at("cube")), {}};
  for (const auto& e : j.at("weights")) {
    const auto pt = e.at("point").get<LatticePoint>();
    if (!a.weights.emplace(pt, e.at("weight").get<double>()).second) throw InvalidArgument("atom: repeated point");
  }
  return a;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice (k,p)-variations, local approximation and classical variations of grid functions", "latvar"};
  app.require_subcommand(1);
  bool pretty = false;
  std::string out_path;
  app.add_flag("--pretty", pretty, "indent the JSON output");
  app.add_option("--out", out_path, "write the report here instead of stdout");

  // var
  auto* var = app.add_subcommand("var", "(k,p)-variation of a grid function");
  GridSource var_src;
  var_src.attach(var);
  int k = 1;
  double p = 1.0;
  std::string method = "brute", weight = "E_k";
  std::optional<double> mesh_cap, volume_cap;
  bool allow_large = false;
  int budget = 1000;
  var->add_option("--k", k, "difference order")->check(CLI::PositiveNumber);
  var->add_option("--p", p, "exponent, 1 <= p < inf");
  var->add_option("--method", method, "brute | dyadic | local_search")
      ->check(CLI::IsMember({"brute", "dyadic", "local_search"}));
  var->add_option("--weight", weight, "E_k | osc_k");
  var->add_option("--mesh-cap", mesh_cap, "restrict to cubes of volume <= cap");
  var->add_option("--volume-cap", volume_cap, "restrict to packings of total volume <= cap");
  var->add_flag("--allow-large", allow_large, "lift the exhaustive guard up to its hard ceiling");
  var->add_option("--budget", budget, "local-search move budget")->check(CLI::NonNegativeNumber);

  // osc
  auto* osc = app.add_subcommand("osc", "finite-difference oscillation on a cube");
  GridSource osc_src;
  osc_src.attach(osc);
  CubeOption osc_cube;
  osc_cube.attach(osc);
  int osc_k_val = 1;
  std::optional<int> osc_axis;
  std::vector<int> osc_alpha;
  osc->add_option("--k", osc_k_val, "difference order")->check(CLI::PositiveNumber);
  osc->add_option("--axis", osc_axis, "directional oscillation along this axis");
  osc->add_option("--alpha", osc_alpha, "mixed oscillation multi-index")->delimiter(',');

  // approx
  auto* approx = app.add_subcommand("approx", "best uniform polynomial approximation on a cube");
  GridSource approx_src;
  approx_src.attach(approx);
  CubeOption approx_cube;
  approx_cube.attach(approx);
  int approx_k = 1;
  approx->add_option("--k", approx_k, "polynomials of degree <= k-1")->check(CLI::PositiveNumber);

  // classical
  auto* classical = app.add_subcommand("classical", "classical multivariate variations");
  GridSource cl_src;
  cl_src.attach(classical);
  std::string notion = "vitali", anchor = "ones", vitali_method = "grid_partition";
  double wiener_p = 1.0;
  classical->add_option("--notion", notion, "jordan | wiener_p | vitali | hardy_krause | tonelli")
      ->check(CLI::IsMember({"jordan", "wiener_p", "vitali", "hardy_krause", "tonelli"}));
  classical->add_option("--anchor", anchor, "Hardy-Krause anchor: ones, zeros or a comma list of indices");
  classical->add_option("--p", wiener_p, "exponent for wiener_p");
  classical->add_option("--vitali-method", vitali_method, "grid_partition | brute | local_search")
      ->check(CLI::IsMember({"grid_partition", "brute", "local_search"}));

  // atom
  auto* atom = app.add_subcommand("atom", "validate an atom, or bound the predual norm of a grid");
  GridSource atom_src;
  atom_src.attach(atom);
  std::string atom_path;
  int atom_k = 1, atom_n = 0;
  double atom_p = 1.0;
  int witnesses = 64;
  atom->add_option("--atom", atom_path, "atom JSON {cube, weights:[{point, weight}]} to validate");
  atom->add_option("--k", atom_k, "vanishing moments through degree k-1")->check(CLI::PositiveNumber);
  atom->add_option("--p", atom_p, "variation exponent");
  atom->add_option("--grid-n", atom_n, "points per axis for --atom");
  atom->add_option("--witnesses", witnesses, "random lower-bound witnesses")->check(CLI::NonNegativeNumber);

  // suite
  auto* suite = app.add_subcommand("suite", "run the property suite");
  std::string config_path;
  std::optional<int> seeds;
  std::vector<std::string> invariants;
  bool fuzz = false, no_timing = false, list = false;
  std::string archive;
  suite->add_option("--config", config_path, "suite config JSON");
  suite->add_option("--seeds", seeds, "seeds per family")->check(CLI::NonNegativeNumber);
  suite->add_option("--invariant", invariants, "run only these invariants");
  suite->add_flag("--fuzz", fuzz, "draw a fresh seed range");
  suite->add_option("--archive", archive, "append failing cells here as JSON lines");
  suite->add_flag("--no-timing", no_timing, "omit runtime fields");
  suite->add_flag("--list", list, "list registered invariants and exit");

  // generate
  auto* gen = app.add_subcommand("generate", "sample a function family");
  GridSource gen_src;
  gen->add_option("family", gen_src.family, "family name")->required();
  gen->add_option("--d", gen_src.d, "dimension")->check(CLI::Range(1, 3));
  gen->add_option("--n", gen_src.n, "points per axis")->check(CLI::Range(2, 1025));
  gen->add_option("--seed", gen_src.seed, "seed");
  gen->add_option("--degree", gen_src.degree, "polynomial degree");
  gen->add_option("--exponent", gen_src.exponent, "lacunary exponent");
  gen->add_option("--terms", gen_src.terms, "lacunary terms");
  gen->add_option("--support", gen_src.support, "point-masses support size");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::istream& in = std::cin;
  json report;
  int status = kExitOk;
  try {
    if (var->parsed()) {
      const GridFunction f = var_src.load(in);
      VariationParams vp{k, p, weight_from_string(weight)};
      vp.validate();
      if (mesh_cap && volume_cap) throw InvalidArgument("--mesh-cap and --volume-cap are exclusive");
      VariationResult r;
      std::string variant = "full";
      if (mesh_cap) {
        r = restricted_variation_detailed(f, vp, *mesh_cap, allow_large);
        variant = "mesh_cap";
      } else if (volume_cap) {
        r = ac_modulus_detailed(f, vp, *volume_cap, allow_large);
        variant = "volume_cap";
      } else if (method == "brute") {
        r = variation_bruteforce(f, vp, allow_large);
      } else if (method == "dyadic") {
        r = variation_dyadic(f, vp);
      } else {
        const Packing seed = is_dyadic_grid(f.points_per_axis()) ? variation_dyadic(f, vp).optimizer : Packing{};
        r = variation_local_search(f, vp, seed, budget);
      }
      report = json{{"command", "var"},
                    {"value", r.value},
                    {"method", to_string(r.method)},
                    {"is_exact", r.is_exact},
                    {"optimizer", packing_to_json(r.optimizer)},
                    {"params", params_json(vp, f.dim())},
                    {"smoothness", vp.smoothness(f.dim())},
                    {"variant", variant},
                    {"grid", json{{"d", f.dim()}, {"n", f.points_per_axis()}}}};
      if (mesh_cap) report["mesh_cap"] = *mesh_cap;
      if (volume_cap) report["volume_cap"] = *volume_cap;
    } else if (osc->parsed()) {
      const GridFunction f = osc_src.load(in);
      const LatticeCube q = osc_cube.resolve(f);
      report = json{{"command", "osc"}, {"cube", cube_to_json(q)}};
      if (!osc_alpha.empty()) {
        if (osc_axis) throw InvalidArgument("--axis and --alpha are exclusive");
        if (static_cast<int>(osc_alpha.size()) != f.dim()) throw InvalidArgument("--alpha needs one entry per axis");
        report["mode"] = "mixed";
        report["alpha"] = osc_alpha;
        report["value"] = osc_mixed(f, q, MultiIndex{osc_alpha});
      } else if (osc_axis) {
        if (*osc_axis < 0 || *osc_axis >= f.dim()) throw InvalidArgument("--axis out of range");
        report["mode"] = "directional";
        report["axis"] = *osc_axis;
        report["k"] = osc_k_val;
        report["value"] = osc_directional(f, q, osc_k_val, *osc_axis);
      } else {
        report["mode"] = "total";
        report["k"] = osc_k_val;
        report["value"] = osc_k(f, q, osc_k_val);
      }
    } else if (approx->parsed()) {
      const GridFunction f = approx_src.load(in);
      const LatticeCube q = approx_cube.resolve(f);
      const ApproxResult r = best_minimax_poly(f, q, approx_k);
      json coeffs = json::array();
      for (const auto& [alpha, c] : r.minimizer.terms()) coeffs.push_back(json{{"alpha", alpha.entries}, {"coefficient", c}});
      json dual = json::array();
      for (const auto& [pt, w] : r.extremal_weights) dual.push_back(json{{"point", pt}, {"weight", w}});
      report = json{{"command", "approx"},
                    {"k", approx_k},
                    {"cube", cube_to_json(q)},
                    {"value", r.value},
                    {"dual_value", r.dual_value},
                    {"minimizer", json{{"center", r.minimizer.center()}, {"scale", r.minimizer.scale()}, {"terms", coeffs}}},
                    {"certificate", points_json(r.certificate)},
                    {"extremal_weights", dual}};
    } else if (classical->parsed()) {
      const GridFunction f = cl_src.load(in);
      std::string used = notion;
      report = json{{"command", "classical"}, {"requested", notion}};
      if (notion == "vitali" && f.dim() == 1) {
        used = "jordan";
        report["note"] = "vitali in one dimension is the jordan variation";
      }
      if ((used == "jordan" || used == "wiener_p") && f.dim() != 1)
        throw InvalidArgument(used + " needs a one-dimensional grid (got d = " + std::to_string(f.dim()) + ")");
      double value = 0.0;
      if (used == "jordan") {
        value = jordan_variation(f);
      } else if (used == "wiener_p") {
        if (!(wiener_p >= 1.0)) throw InvalidArgument("--p must be >= 1");
        value = wiener_variation(f, wiener_p);
        report["p"] = wiener_p;
      } else if (used == "vitali") {
        const VitaliMethod m = vitali_method == "brute"          ? VitaliMethod::brute
                               : vitali_method == "local_search" ? VitaliMethod::local_search
                                                                 : VitaliMethod::grid_partition;
        const auto r = vitali_variation(f, m);
        value = r.value;
        report["method"] = to_string(r.method);
        report["is_exact"] = r.is_exact;
      } else if (used == "hardy_krause") {
        LatticePoint a;
        if (anchor == "ones") {
          a = default_anchor(f.dim(), f.points_per_axis());
        } else if (anchor == "zeros") {
          a = LatticePoint(static_cast<std::size_t>(f.dim()), 0);
        } else {
          std::stringstream ss(anchor);
          std::string tok;
          while (std::getline(ss, tok, ',')) {
            try {
              a.push_back(std::stoi(tok));
            } catch (const std::exception&) {
              throw InvalidArgument("--anchor: expected ones, zeros or a comma list of indices");
            }
          }
          if (!f.contains(a)) throw InvalidArgument("--anchor is not a grid point");
        }
        value = hardy_krause_variation(f, a);
        report["anchor"] = a;
      } else {
        value = tonelli_variation(f);
      }
      report["notion"] = used;
      report["value"] = value;
      report["grid"] = json{{"d", f.dim()}, {"n", f.points_per_axis()}};
    } else if (atom->parsed()) {
      if (!atom_path.empty()) {
        if (atom_n < 2) throw InvalidArgument("--atom needs --grid-n >= 2");
        const Atom a = atom_from_json(json::parse(read_text(atom_path)));
        const auto diag = validate_atom(a, atom_k, atom_n);
        report = json{{"command", "atom"},    {"mode", "validate"},        {"valid", diag.valid},
                      {"support_ok", diag.support_ok}, {"l1_ok", diag.l1_ok}, {"moments_ok", diag.moments_ok},
                      {"l1_norm", diag.l1_norm}, {"max_moment", diag.max_moment}, {"problems", diag.problems},
                      {"k", atom_k}};
      } else {
        const GridFunction g = atom_src.load(in);
        VariationParams vp{atom_k, atom_p, WeightKind::E_k};
        vp.validate();
        UNormOptions opts;
        opts.random_witnesses = witnesses;
        opts.seed = atom_src.seed;
        const auto b = u_norm_bounds(g, vp, opts);
        json chains = json::array();
        for (const auto& c : b.witness_decomposition) chains.push_back(chain_json(c));
        report = json{{"command", "atom"},
                      {"mode", "bounds"},
                      {"lower", b.lower},
                      {"upper", b.upper},
                      {"lower_source", b.lower_source},
                      {"upper_source", b.upper_source},
                      {"decomposition", chains},
                      {"lower_witness", grid_to_json(b.witness_function)},
                      {"params", params_json(vp, g.dim())}};
      }
    } else if (suite->parsed()) {
      if (list) {
        json names = json::array();
        for (const auto& def : invariant_registry())
          names.push_back(json{{"name", def.name}, {"module", def.module}, {"families", def.families},
                               {"description", def.description}});
        report = json{{"invariants", names}};
      } else {
        SuiteConfig cfg = config_path.empty() ? SuiteConfig{} : suite_config_from_json(json::parse(read_text(config_path)));
        if (seeds) cfg.seeds = *seeds;
        if (!invariants.empty()) cfg.invariants = invariants;
        if (fuzz) cfg.fuzz = true;
        if (!archive.empty()) cfg.archive_path = archive;
        const SuiteReport r = run_suite(cfg);
        report = suite_report_to_json(r, !no_timing);
        if (!r.all_passed()) status = kExitSuiteFailure;
      }
    } else if (gen->parsed()) {
      report = grid_to_json(gen_src.load(in));
    }
  } catch (const GuardViolation& e) {
    err << "error: " << e.what() << "\n"
        << "hint: use --method dyadic or --method local_search for large grids, or --allow-large\n";
    return kExitGuard;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string text = report.dump(pretty ? 2 : -1) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
    f << text;
  }
  return status;
}

}  // namespace latvar
