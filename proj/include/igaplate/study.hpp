#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "igaplate/condensation.hpp"
#include "igaplate/dof_map.hpp"

namespace igaplate {

struct StudyConfig {
  std::string geometry = "undistorted";  // catalog name or geometry file
  std::vector<Variant> variants{Variant::ead};
  std::vector<int> degrees{2};
  std::vector<int> levels{1, 2, 3, 4};
  std::vector<double> thicknesses{0.01};
  bool continuity_reduction = true;
  WeightMode shear_weights = WeightMode::nurbs;
  Condensation condensation = Condensation::automatic;
  std::string out;      // CSV path, empty for none
  bool timing = true;   // false writes zero times so reruns give identical bytes
  int jobs = 0;         // 0 = hardware concurrency
};

struct ConvergenceRecord {
  std::string geometry;
  Variant variant = Variant::ead;
  int p = 0;
  double t = 0.0;
  int level = 0;
  int elems_per_dir = 0;
  int n_dof_primal = 0;
  int n_dof_mixed = 0;
  long nnz_condensed = 0;
  double l2_error = 0.0;
  double rate = 0.0;  // NaN on the coarsest level or after a failed level
  double assembly_s = 0.0;
  double factor_s = 0.0;
  double solve_s = 0.0;
  double lump_dev = 0.0;
  std::string failure;  // error message of a failed cell, empty on success

  bool ok() const { return failure.empty(); }
};

inline constexpr std::string_view kCsvHeader =
    "geometry,variant,p,t,level,elems_per_dir,n_dof_primal,n_dof_mixed,nnz_condensed,l2_error,rate,"
    "assembly_s,factor_s,solve_s,lump_dev";

// Catalog name first, otherwise a geometry file.
PatchAssembly load_geometry(const std::string& name_or_path);

// `key = value` lines; lists are comma separated and levels also accept
// a range like 1..5.
StudyConfig parse_study_config(std::string_view text);
StudyConfig read_study_config(const std::string& path);

// One solve and error evaluation on the benchmark problem.
ConvergenceRecord run_cell(const std::vector<SurfacePatch>& coarse, const std::string& geometry,
                           const SolveConfig& cfg);

// Every (variant, p, t, level) cell, independent jobs, records in a fixed
// order. Failed cells are kept with their message and the study goes on.
std::vector<ConvergenceRecord> run_convergence_study(const StudyConfig& cfg);

void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records, bool timing = true);

// Least-squares slope of -log2(error) against level.
double ls_slope(const std::vector<int>& levels, const std::vector<double>& errors);

}  // namespace igaplate
