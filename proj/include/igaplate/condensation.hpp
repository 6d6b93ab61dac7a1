#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "igaplate/dual_basis.hpp"
#include "igaplate/plate.hpp"
#include "igaplate/sparse.hpp"

namespace igaplate {

// std is spelled `standard` to stay clear of the namespace name.
enum class Variant { standard, mxd, lmp, ad, ead };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);
std::string_view to_string(WeightMode m);
WeightMode parse_weight_mode(std::string_view name);

enum class Condensation {
  automatic,  // mxd monolithic, lmp diagonal, ad/ead identity
  unlumped,   // exact Schur complement of the (transformed) shear blocks
};

struct SolveConfig {
  Variant variant = Variant::ead;
  int degree = 2;
  int level = 0;
  double thickness = 0.1;
  bool continuity_reduction = true;
  WeightMode shear_weights = WeightMode::nurbs;
  Condensation condensation = Condensation::automatic;
  double E = 1.0e4;
  double nu = 0.3;
  double kappa = 5.0 / 6.0;
};

Scheme scheme_for(Variant v);
RefineOptions refine_options(const SolveConfig& cfg);

struct PatchTransforms {
  std::vector<DualTransform2D> t1;
  std::vector<DualTransform2D> t2;
};

// Full reproduction per direction: r equals the shear space degree.
PatchTransforms build_transforms(const Discretization& disc, DualVariant variant);

SpMat block_diagonal(const std::vector<DualTransform2D>& blocks, const std::vector<int>& offsets, int total);

// Replaces the shear rows by T1*K_S1* and T2*K_S2*.
MixedSystem pg_transform(const MixedSystem& system, const SpMat& T1, const SpMat& T2);

// Same product assembled element by element from retained element blocks.
MixedSystem pg_transform_elementwise(const MixedSystem& system, const PatchTransforms& transforms,
                                     const Discretization& disc);

struct LumpResult {
  Eigen::VectorXd diagonal;
  double max_deviation = 0.0;  // max |rowsum - 1|
};

// Row-sum lumping. With dual_identity the result is the exact identity
// and the row-sum deviation is recorded instead.
LumpResult row_sum_lump(const SpMat& block, bool dual_identity);

enum class CondenseMode { unlumped, diagonal, identity };

struct CondensedSystem {
  SpMat K;
  Eigen::VectorXd f;
  std::vector<int> free_dofs;
  int n_d = 0;
  SpMat R1;  // S1 = R1 * d_free
  SpMat R2;
};

// Eliminates the shear unknowns. Diagonal mode needs the lumped diagonals.
CondensedSystem condense(const MixedSystem& system, CondenseMode mode,
                         const Eigen::VectorXd* D1 = nullptr, const Eigen::VectorXd* D2 = nullptr);

struct ShearCoefficients {
  Eigen::VectorXd s1;
  Eigen::VectorXd s2;
};

ShearCoefficients recover_shear(const CondensedSystem& cond, const Eigen::VectorXd& d_free);

// Scatter free values into a full displacement vector (zeros elsewhere).
Eigen::VectorXd expand_free(const std::vector<int>& free_dofs, int n_d, const Eigen::VectorXd& x);

struct Diagnostics {
  int n_dof_primal = 0;
  int n_dof_mixed = 0;
  int n_dof_solved = 0;
  long nnz_solved = 0;
  int bandwidth = 0;
  double assembly_s = 0.0;
  double factor_s = 0.0;
  double solve_s = 0.0;
  double lump_dev = 0.0;
};

struct Solution {
  Discretization disc;
  Eigen::VectorXd d;  // full displacement vector, w then Theta
  ShearCoefficients shear;
  Diagnostics diag;
};

Solution solve_variant(const std::vector<SurfacePatch>& coarse, const SolveConfig& cfg,
                       const LoadFunction& load);

}  // namespace igaplate
