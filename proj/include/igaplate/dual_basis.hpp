#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "igaplate/knot_vector.hpp"
#include "igaplate/sparse.hpp"

namespace igaplate {

enum class ContinuityMode { all_knots, preserve_C0 };
enum class DualVariant { AD, eAD };
enum class WeightMode { bspline, nurbs };

KnotVector reduce_continuity(const KnotVector& kv, ContinuityMode mode);

// G_ik = integral of N_i N_k over the domain.
Eigen::MatrixXd gram_matrix(const KnotVector& kv);

// mu_k = integral of N_k.
Eigen::VectorXd basis_integrals(const KnotVector& kv);

// b_i = integral of f N_i, integrated span by span (exact for piecewise
// polynomials of degree <= extra_degree whose breaks are knots).
Eigen::VectorXd basis_moments(const KnotVector& kv, const std::function<double(double)>& f,
                              int extra_degree);

// Coefficients a with sum a_i N_i = L2 projection of f.
Eigen::VectorXd project_to_spline(const KnotVector& kv, const std::function<double(double)>& f,
                                  int extra_degree);

struct TargetFunction {
  std::function<double(double)> f;
  int degree;  // polynomial degree on every span
};

// Targets reproduced by the dual: monomials 0..r, plus for eAD the
// truncated powers at every knot of multiplicity >= 2.
std::vector<TargetFunction> dual_targets(const KnotVector& kv, int r, DualVariant variant);

struct DualTransform1D {
  Eigen::MatrixXd S;
  DualVariant variant = DualVariant::AD;
  int r = 0;
  KnotVector knots;
  double reproduction_error = 0.0;
};

DualTransform1D dual_transform_1d(const KnotVector& kv, int r, DualVariant variant);

struct DualTransform2D {
  SpMat matrix;
  Eigen::SparseMatrix<double> by_column;  // same entries, column-major
  WeightMode mode = WeightMode::bspline;
  Eigen::VectorXd weights;  // Lambda diagonal (nurbs mode only)
  int n = 0;
  int m = 0;
};

// Kronecker product Su (x) Sv; with weights the result is
// Lambda^-1 (Su (x) Sv) Lambda^-1.
DualTransform2D dual_transform_2d(const DualTransform1D& Su, const DualTransform1D& Sv,
                                  const std::vector<double>* weights = nullptr);

struct ElementTransform {
  std::vector<int> rows;  // global test-function indices
  std::vector<int> cols;  // the element's trial indices
  Eigen::MatrixXd block;
};

ElementTransform extract_element_transform(const DualTransform2D& S2d,
                                           const std::vector<int>& element_dofs);

}  // namespace igaplate
