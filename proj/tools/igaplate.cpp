// Command line front end: single solves, convergence studies and the
// geometry catalog.
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "igaplate/benchmark.hpp"
#include "igaplate/error.hpp"
#include "igaplate/geometry_io.hpp"
#include "igaplate/study.hpp"

using namespace igaplate;

namespace {

int run_solve(const std::string& geometry, const std::string& variant, int degree, int level,
              double thickness, bool no_reduction, const std::string& weights, const std::string& out) {
  SolveConfig cfg;
  cfg.variant = parse_variant(variant);
  cfg.degree = degree;
  cfg.level = level;
  cfg.thickness = thickness;
  cfg.continuity_reduction = !no_reduction;
  cfg.shear_weights = parse_weight_mode(weights);
  const auto geo = load_geometry(geometry);
  const auto rec = run_cell(geo.patches, geometry, cfg);
  if (!rec.ok()) {
    std::cerr << "solve failed: " << rec.failure << "\n";
    return 2;
  }
  std::cout << "geometry      " << geometry << "\n"
            << "variant       " << variant << "\n"
            << "elements/dir  " << rec.elems_per_dir << "\n"
            << "dofs primal   " << rec.n_dof_primal << "\n"
            << "dofs mixed    " << rec.n_dof_mixed << "\n"
            << "nnz solved    " << rec.nnz_condensed << "\n"
            << "l2 error      " << rec.l2_error << "\n"
            << "lump dev      " << rec.lump_dev << "\n"
            << "time asm/fac/sol " << rec.assembly_s << " " << rec.factor_s << " " << rec.solve_s << "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + out);
    write_csv(f, {rec});
  }
  return 0;
}

int run_convergence(const std::string& config_path) {
  const StudyConfig cfg = read_study_config(config_path);
  const auto records = run_convergence_study(cfg);
  if (cfg.out.empty()) {
    write_csv(std::cout, records, cfg.timing);
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + cfg.out);
    write_csv(f, records, cfg.timing);
    std::cerr << "wrote " << records.size() << " rows to " << cfg.out << "\n";
  }
  int failed = 0;
  for (const auto& r : records)
    if (!r.ok()) {
      ++failed;
      std::cerr << "cell " << to_string(r.variant) << " p=" << r.p << " t=" << r.t << " level=" << r.level
                << " failed: " << r.failure << "\n";
    }
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric Reissner-Mindlin plate solver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve the clamped-plate benchmark once");
  std::string geometry, variant = "ead", weights = "nurbs", out;
  int degree = 2, level = 2;
  double thickness = 0.1;
  bool no_reduction = false;
  solve->add_option("--geometry", geometry, "Catalog name or geometry file")->required();
  solve->add_option("--variant", variant, "std, mxd, lmp, ad or ead")
      ->check(CLI::IsMember({"std", "mxd", "lmp", "ad", "ead"}));
  solve->add_option("--degree", degree, "Polynomial degree")->check(CLI::Range(1, 8));
  solve->add_option("--level", level, "Dyadic refinement level")->check(CLI::Range(0, 10));
  solve->add_option("--thickness", thickness, "Plate thickness in m")->check(CLI::PositiveNumber);
  solve->add_flag("--no-continuity-reduction", no_reduction, "Keep the coarse knot multiplicities");
  solve->add_option("--shear-weights", weights, "nurbs or bspline")->check(CLI::IsMember({"nurbs", "bspline"}));
  solve->add_option("--out", out, "Write the result row as CSV");

  auto* conv = app.add_subcommand("convergence", "Run a convergence study from a config file");
  std::string config;
  conv->add_option("--config", config, "key = value file")->required()->check(CLI::ExistingFile);

  auto* geo = app.add_subcommand("geometry", "List or export catalog geometries");
  bool list = false;
  std::string export_name;
  auto* list_opt = geo->add_flag("--list", list, "Print the catalog names");
  auto* export_opt = geo->add_option("--export", export_name, "Print one geometry in the text format");
  list_opt->excludes(export_opt);
  geo->require_option(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(geometry, variant, degree, level, thickness, no_reduction, weights, out);
    if (*conv) return run_convergence(config);
    if (list) {
      for (const auto& name : geometry_names()) std::cout << name << "\n";
      return 0;
    }
    std::cout << format_geometry(geometry_catalog(export_name).patches);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
