#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "igaplate/dof_map.hpp"
#include "igaplate/dual_basis.hpp"
#include "igaplate/sparse.hpp"
#include "igaplate/surface.hpp"

namespace igaplate {

struct PlateMaterial {
  double E = 1.0e4;
  double nu = 0.3;
  double t = 0.1;
  double kappa = 5.0 / 6.0;
  double G = 0.0;
  Eigen::Matrix3d D_M = Eigen::Matrix3d::Zero();
  Eigen::Matrix2d D_S = Eigen::Matrix2d::Zero();

  double kGt() const { return kappa * G * t; }
  double bending_stiffness() const { return E * t * t * t / (12.0 * (1.0 - nu * nu)); }
};

PlateMaterial material(double E, double nu, double t, double kappa = 5.0 / 6.0);

/// Tensor-product spline space; empty weights mean plain B-splines.
struct SplineSpace {
  KnotVector ku;
  KnotVector kv;
  std::vector<double> weights;

  int n() const { return ku.num_basis(); }
  int m() const { return kv.num_basis(); }
  int size() const { return n() * m(); }
};

struct FieldSpaces {
  SurfacePatch geometry;  // refined geometry; also the w and Theta space
  SplineSpace disp;
  SplineSpace shear1;  // degree reduced along xi
  SplineSpace shear2;  // degree reduced along eta
  bool has_shear = false;
};

struct RefineOptions {
  int degree = 2;
  int level = 0;
  bool continuity_reduction = true;
  ContinuityMode mode = ContinuityMode::all_knots;
  WeightMode shear_weights = WeightMode::nurbs;
  bool with_shear = true;
};

// Knot vector of the derivative space: same interior knots, one fewer
// repetition at both ends, degree p-1.
KnotVector derivative_knot_vector(const KnotVector& kv);

// Continuity reduction on the coarse patch, degree elevation to
// max(degree, coarse degree) per direction, then 2^level dyadic spans per
// coarse span.
SurfacePatch refine_patch(const SurfacePatch& coarse, const RefineOptions& opt);

FieldSpaces build_field_spaces(const SurfacePatch& coarse, const RefineOptions& opt);

// Spaces on the whole (possibly multi-patch) domain with their node map.
struct Discretization {
  std::vector<FieldSpaces> spaces;
  PatchAssembly dofs;
  std::vector<int> s1_offset;  // per patch, start in the global S1 numbering
  std::vector<int> s2_offset;  // per patch, start in the global S2 numbering
  int n_s1 = 0;
  int n_s2 = 0;

  int n_nodes() const { return dofs.n_nodes; }
  int n_d() const { return 3 * dofs.n_nodes; }
};

Discretization discretize(const std::vector<SurfacePatch>& coarse, const RefineOptions& opt);
Discretization discretize(std::vector<FieldSpaces> spaces);

enum class Scheme { primal, galerkin, weighted };

using LoadFunction = std::function<double(double x, double y)>;

struct ElementDomain {
  int patch = 0;
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
};

std::vector<ElementDomain> patch_elements(const FieldSpaces& spaces, int patch_index = 0);

/// Element blocks with local displacement ordering
/// [w_0..w_{nd-1}, theta1_0, theta2_0, theta1_1, ...].
struct ElementMatrices {
  std::vector<int> nodes;  // patch-local displacement control points
  std::vector<int> s1;     // patch-local S1 indices
  std::vector<int> s2;     // patch-local S2 indices
  Eigen::MatrixXd Kdd;
  Eigen::MatrixXd KdS1, KdS2;
  Eigen::MatrixXd KS1d, KS2d;
  Eigen::MatrixXd KS1S1, KS2S2;
  Eigen::VectorXd fw;
};

ElementMatrices element_matrices(const ElementDomain& elem, const FieldSpaces& spaces,
                                 const PlateMaterial& mat, Scheme scheme,
                                 const LoadFunction& load, int quad_extra = 0);

struct ElementRecord {
  int patch = 0;
  std::vector<int> d;   // global displacement dofs of the element
  std::vector<int> s1;  // global S1 indices
  std::vector<int> s2;  // global S2 indices
  Eigen::MatrixXd KS1d, KS2d, KS1S1, KS2S2;
};

/// Global block system. Shear rows are sign-normalized so the S-S blocks
/// are positive definite.
struct MixedSystem {
  Scheme scheme = Scheme::galerkin;
  int n_nodes = 0;
  int n_s1 = 0;
  int n_s2 = 0;
  SpMat Kdd, KdS1, KdS2, KS1d, KS2d, KS1S1, KS2S2;
  Eigen::VectorXd f;
  std::vector<ElementRecord> elements;  // filled when requested
  std::vector<int> free_dofs;           // all dofs until apply_clamped_bc
  std::vector<int> fixed_dofs;

  int n_d() const { return 3 * n_nodes; }
};

inline int w_dof(int node) { return node; }
inline int theta_dof(int n_nodes, int node, int c) { return n_nodes + 2 * node + c; }

MixedSystem assemble(const Discretization& disc, const PlateMaterial& mat, Scheme scheme,
                     const LoadFunction& load, bool keep_elements = false, int quad_extra = 0);

struct BcReport {
  int fixed = 0;
  int free = 0;
};

// Clamps w and Theta on every exterior edge node; shear stays free.
BcReport apply_clamped_bc(MixedSystem& system, const Discretization& disc);

// Full saddle-point matrix over the free displacement dofs and all shear
// dofs, in the order [d_free, S1, S2].
SpMat saddle_matrix(const MixedSystem& system);

}  // namespace igaplate
