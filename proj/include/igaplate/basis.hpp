#pragma once

#include <Eigen/Dense>

#include "igaplate/knot_vector.hpp"

namespace igaplate {

/// Nonzero univariate B-spline functions at one parameter value.
struct BasisEval1D {
  int span = 0;
  int first = 0;        // global index of ders(0, 0)
  Eigen::MatrixXd ders;  // (nderiv+1) x (p+1), row k holds the k-th derivative
};

BasisEval1D eval_basis_1d(const KnotVector& kv, double x, int nderiv = 0);

// Dense row vector of all n basis values at x (test and setup helper).
Eigen::RowVectorXd basis_row(const KnotVector& kv, double x);

}  // namespace igaplate
