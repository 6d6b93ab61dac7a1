#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "igaplate/dof_map.hpp"
#include "igaplate/plate.hpp"

namespace igaplate {

inline constexpr double kLoadAmplitude = 100.0;

// Transverse pressure of the clamped square benchmark (L = 1 m).
double load_function(double xi, double eta, const PlateMaterial& mat);

// Closed-form deflection field of the benchmark, without the load amplitude.
double exact_displacement(double xi, double eta, double t, double nu);

// Rotations belonging to exact_displacement (gradient of its Kirchhoff part).
Eigen::Vector2d exact_rotation(double xi, double eta);

// Deflection produced by load_function: the closed form scaled by the load
// amplitude, which is what discrete solutions converge to.
double reference_displacement(double xi, double eta, double t, double nu);

using ScalarField = std::function<double(double x, double y)>;

// sqrt(integral (w_h - w)^2 dA) in physical coordinates, (p+3)^2 Gauss
// points per element.
double l2_error(const Discretization& disc, const Eigen::VectorXd& d, const ScalarField& exact);

// Discrete deflection of one patch at a parametric point.
double eval_deflection(const Discretization& disc, const Eigen::VectorXd& d, int patch, double xi,
                       double eta);

std::vector<std::string> geometry_names();
PatchAssembly geometry_catalog(const std::string& name);

}  // namespace igaplate
