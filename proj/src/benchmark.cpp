#include "igaplate/benchmark.hpp"

#include <cmath>

#include "igaplate/error.hpp"
#include "igaplate/quadrature.hpp"

namespace igaplate {

namespace {

double f1_hat(double x, double y) { return x * (x - 1.0) * (5.0 * y * y - 5.0 * y + 1.0); }
double f2_hat(double x, double y) { return y * (y - 1.0) * (5.0 * x * x - 5.0 * x + 1.0); }
double sq(double v) { return v * v; }
double cube(double v) { return v * v * v; }

}  // namespace

double load_function(double xi, double eta, const PlateMaterial& mat) {
  const double h1 = f1_hat(xi, eta), h2 = f2_hat(xi, eta);
  const double f1 = 12.0 * h2 * (2.0 * sq(eta) * sq(eta - 1.0) + h1);
  const double f2 = 12.0 * h1 * (2.0 * sq(xi) * sq(xi - 1.0) + h2);
  return kLoadAmplitude * mat.bending_stiffness() * (f1 + f2);
}

double exact_displacement(double xi, double eta, double t, double nu) {
  const double w0 = cube(xi) * cube(xi - 1.0) * cube(eta) * cube(eta - 1.0) / 3.0;
  const double w1 = sq(eta) * sq(eta - 1.0) * xi * (xi - 1.0) * f2_hat(xi, eta);
  const double w2 = sq(xi) * sq(xi - 1.0) * eta * (eta - 1.0) * f1_hat(xi, eta);
  return w0 - 2.0 * t * t / (5.0 * (1.0 - nu)) * (w1 + w2);
}

Eigen::Vector2d exact_rotation(double xi, double eta) {
  const double gx = sq(xi) * sq(xi - 1.0) * (2.0 * xi - 1.0);
  const double gy = sq(eta) * sq(eta - 1.0) * (2.0 * eta - 1.0);
  return {gx * cube(eta) * cube(eta - 1.0), gy * cube(xi) * cube(xi - 1.0)};
}

double reference_displacement(double xi, double eta, double t, double nu) {
  return kLoadAmplitude * exact_displacement(xi, eta, t, nu);
}

double eval_deflection(const Discretization& disc, const Eigen::VectorXd& d, int patch, double xi,
                       double eta) {
  const auto& fs = disc.spaces[static_cast<std::size_t>(patch)];
  const auto& nmap = disc.dofs.node_map[static_cast<std::size_t>(patch)];
  const auto e = eval_rational_2d(fs.disp.ku, fs.disp.kv, fs.disp.weights, xi, eta, 0);
  double w = 0.0;
  for (std::size_t l = 0; l < e.indices.size(); ++l)
    w += e.values[static_cast<Eigen::Index>(l)] * d[nmap[static_cast<std::size_t>(e.indices[l])]];
  return w;
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& d, const ScalarField& exact) {
  double sum = 0.0;
  for (std::size_t pi = 0; pi < disc.spaces.size(); ++pi) {
    const auto& fs = disc.spaces[pi];
    const auto& nmap = disc.dofs.node_map[pi];
    const int p = fs.geometry.degree_u(), q = fs.geometry.degree_v();
    for (const auto& el : patch_elements(fs, static_cast<int>(pi))) {
      const auto gu = gauss_on_interval(p + 3, el.u0, el.u1);
      const auto gv = gauss_on_interval(q + 3, el.v0, el.v1);
      for (std::size_t a = 0; a < gu.points.size(); ++a)
        for (std::size_t b = 0; b < gv.points.size(); ++b) {
          const auto se = eval_surface(fs.geometry, gu.points[a], gv.points[b], 1);
          double wh = 0.0;
          for (std::size_t l = 0; l < se.basis.indices.size(); ++l)
            wh += se.basis.values[static_cast<Eigen::Index>(l)] *
                  d[nmap[static_cast<std::size_t>(se.basis.indices[l])]];
          const double diff = wh - exact(se.point.x(), se.point.y());
          sum += diff * diff * gu.weights[a] * gv.weights[b] * std::abs(se.det);
        }
    }
  }
  return std::sqrt(sum);
}

std::vector<std::string> geometry_names() {
  return {"undistorted", "nurbs_distorted", "c1_single", "c0_single", "mp_linear", "mp_c1", "mp_various"};
}

namespace {

struct Row {
  double x, y, w;
};

// Rows are listed eta-major (eta outer, xi fastest), as in the tables.
SurfacePatch make_patch(std::vector<double> ku, int p, std::vector<double> kv, int q,
                        const std::vector<Row>& rows) {
  SurfacePatch s;
  s.knots_u = validate_knot_vector(std::move(ku), p);
  s.knots_v = validate_knot_vector(std::move(kv), q);
  s.net.n = s.knots_u.num_basis();
  s.net.m = s.knots_v.num_basis();
  s.net.points.resize(rows.size());
  s.net.weights.resize(rows.size());
  for (int j = 0; j < s.net.m; ++j)
    for (int i = 0; i < s.net.n; ++i) {
      const Row& r = rows[static_cast<std::size_t>(j * s.net.n + i)];
      const auto k = static_cast<std::size_t>(s.net.index(i, j));
      s.net.points[k] = Eigen::Vector3d(r.x, r.y, 0.0);
      s.net.weights[k] = r.w;
    }
  validate_patch(s);
  return s;
}

// Two patches from a three-column table (x = left, middle, right).
std::vector<SurfacePatch> split_table(std::vector<double> kv, int q, const std::vector<Row>& rows) {
  std::vector<Row> left, right;
  for (std::size_t r = 0; r < rows.size(); r += 3) {
    left.push_back(rows[r]);
    left.push_back(rows[r + 1]);
    right.push_back(rows[r + 1]);
    right.push_back(rows[r + 2]);
  }
  return {make_patch({0, 0, 1, 1}, 1, kv, q, left), make_patch({0, 0, 1, 1}, 1, kv, q, right)};
}

}  // namespace

PatchAssembly geometry_catalog(const std::string& name) {
  std::vector<SurfacePatch> patches;
  if (name == "undistorted") {
    patches.push_back(make_patch({0, 0, 1, 1}, 1, {0, 0, 1, 1}, 1,
                                 {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
  } else if (name == "nurbs_distorted") {
    patches.push_back(make_patch({0, 0, 0, 1, 1, 1}, 2, {0, 0, 0, 1, 1, 1}, 2,
                                 {{0, 0, 1}, {0.5, 0, 1}, {1, 0, 1},
                                  {0, 0.5, 1}, {0.3, 0.3, 1.5}, {1, 0.5, 1},
                                  {0, 1, 1}, {0.5, 1, 1}, {1, 1, 1}}));
  } else if (name == "c1_single") {
    patches.push_back(make_patch({0, 0, 0, 0.5, 1, 1, 1}, 2, {0, 0, 0, 0.5, 1, 1, 1}, 2,
                                 {{0, 0, 1}, {0.25, 0, 1}, {0.75, 0, 1}, {1, 0, 1},
                                  {0, 0.25, 1}, {0.45, 0.4, 1}, {0.7, 0.2, 1}, {1, 0.25, 1},
                                  {0, 0.75, 1}, {0.2, 0.9, 1}, {0.5, 0.6, 1}, {1, 0.75, 1},
                                  {0, 1, 1}, {0.25, 1, 1}, {0.75, 1, 1}, {1, 1, 1}}));
  } else if (name == "c0_single") {
    patches.push_back(make_patch({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2, {0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2,
                                 {{0, 0, 1}, {0.25, 0, 1}, {0.5, 0, 1}, {0.75, 0, 1}, {1, 0, 1},
                                  {0, 0.25, 1}, {0.25, 0.25, 1}, {0.5, 0.25, 1}, {0.75, 0.25, 1}, {1, 0.25, 1},
                                  {0, 0.5, 1}, {0.3, 0.55, 1}, {0.45, 0.45, 1}, {0.65, 0.45, 1}, {1, 0.5, 1},
                                  {0, 0.75, 1}, {0.25, 0.75, 1}, {0.55, 0.6, 1}, {0.65, 0.65, 1}, {1, 0.75, 1},
                                  {0, 1, 1}, {0.25, 1, 1}, {0.5, 1, 1}, {0.75, 1, 1}, {1, 1, 1}}));
  } else if (name == "mp_linear") {
    patches = split_table({0, 0, 1, 1}, 1, {{0, 0, 1}, {0.5, 0, 1}, {1, 0, 1}, {0, 1, 1}, {0.5, 1, 1}, {1, 1, 1}});
  } else if (name == "mp_c1") {
    patches = split_table({0, 0, 0, 0.5, 1, 1, 1}, 2,
                          {{0, 0, 1}, {0.5, 0, 1}, {1, 0, 1},
                           {0, 0.25, 1}, {0.6, 0.3, 1}, {1, 0.25, 1},
                           {0, 0.75, 1}, {0.4, 0.7, 1}, {1, 0.75, 1},
                           {0, 1, 1}, {0.5, 1, 1}, {1, 1, 1}});
  } else if (name == "mp_various") {
    patches = split_table({0, 0, 0, 0, 0.3, 0.3, 0.5, 0.5, 0.5, 0.7, 1, 1, 1, 1}, 3,
                          {{0, 0, 1}, {0.5, 0, 1}, {1, 0, 1},
                           {0, 0.1, 1}, {0.55, 0.1, 1.2}, {1, 0.1, 1},
                           {0, 0.2, 1}, {0.52, 0.2, 1.4}, {1, 0.2, 1},
                           {0, 11.0 / 30.0, 1}, {0.5, 0.32, 0.8}, {1, 11.0 / 30.0, 1},
                           {0, 13.0 / 30.0, 1}, {0.4, 0.45, 1}, {1, 13.0 / 30.0, 1},
                           {0, 8.0 / 15.0, 1}, {0.42, 0.55, 1.3}, {1, 8.0 / 15.0, 1},
                           {0, 0.6, 1}, {0.56, 0.69, 1.1}, {1, 0.6, 1},
                           {0, 23.0 / 30.0, 1}, {0.55, 0.8, 1.5}, {1, 23.0 / 30.0, 1},
                           {0, 0.9, 1}, {0.5, 0.95, 0.9}, {1, 0.9, 1},
                           {0, 1, 1}, {0.5, 1, 1}, {1, 1, 1}});
  } else {
    throw Error(ErrorCode::UnknownGeometry, "no catalog geometry named '" + name + "'");
  }
  return build_dof_map(patches);
}

}  // namespace igaplate
