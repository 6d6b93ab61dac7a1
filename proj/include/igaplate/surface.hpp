#pragma once

#include <vector>

#include <Eigen/Dense>

#include "igaplate/basis.hpp"
#include "igaplate/knot_vector.hpp"

namespace igaplate {

/// Control points and weights of a tensor-product net. Storage index is
/// k = i*m + j with i along xi (outer) and j along eta.
struct ControlNet {
  int n = 0;
  int m = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;

  int index(int i, int j) const { return i * m + j; }
  const Eigen::Vector3d& point(int i, int j) const { return points[static_cast<std::size_t>(index(i, j))]; }
  double weight(int i, int j) const { return weights[static_cast<std::size_t>(index(i, j))]; }
};

struct SurfacePatch {
  KnotVector knots_u;
  KnotVector knots_v;
  ControlNet net;

  int degree_u() const { return knots_u.degree(); }
  int degree_v() const { return knots_v.degree(); }
  bool operator==(const SurfacePatch& o) const;
};

// Checks positive weights and that the net matches the knot vectors.
void validate_patch(const SurfacePatch& patch);

/// Nonzero bivariate rational functions at one parametric point.
/// Local ordering is a*(q+1)+b with a along xi, matching `indices`.
struct BasisEval2D {
  std::vector<int> indices;
  Eigen::VectorXd values;
  Eigen::VectorXd d_xi;
  Eigen::VectorXd d_eta;
  double W = 1.0;
  double dW_xi = 0.0;
  double dW_eta = 0.0;
};

// Tensor-product rational basis for arbitrary knot vectors and weights
// (weights may be empty for a plain B-spline space).
BasisEval2D eval_rational_2d(const KnotVector& ku, const KnotVector& kv,
                             const std::vector<double>& weights, double xi, double eta,
                             int nderiv);

struct SurfaceEval {
  BasisEval2D basis;
  Eigen::Vector3d point;
  Eigen::Matrix2d jacobian;  // rows x,y ; columns xi,eta
  double det = 1.0;
};

SurfaceEval eval_surface(const SurfacePatch& patch, double xi, double eta, int nderiv = 1);

SurfacePatch insert_knots(const SurfacePatch& patch, const std::vector<double>& new_u,
                          const std::vector<double>& new_v);
SurfacePatch elevate_degree(const SurfacePatch& patch, int dp, int dq);

// Coefficient transfer matrix from `coarse` into the nested space `fine`
// (fine coefficients = T * coarse coefficients).
Eigen::MatrixXd transfer_matrix(const KnotVector& coarse, const KnotVector& fine);

// Knot vector of the same space raised in degree by dp with continuity kept.
KnotVector elevated_knot_vector(const KnotVector& kv, int dp);

// Knot vector with the sorted knots merged in (multiplicity checks included).
KnotVector inserted_knot_vector(const KnotVector& kv, const std::vector<double>& knots);

}  // namespace igaplate
