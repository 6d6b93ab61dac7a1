#include "igaplate/surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "igaplate/error.hpp"
#include "igaplate/quadrature.hpp"

namespace igaplate {

bool SurfacePatch::operator==(const SurfacePatch& o) const {
  return knots_u == o.knots_u && knots_v == o.knots_v && net.n == o.net.n && net.m == o.net.m &&
         net.points == o.net.points && net.weights == o.net.weights;
}

void validate_patch(const SurfacePatch& patch) {
  const auto& net = patch.net;
  if (net.n != patch.knots_u.num_basis() || net.m != patch.knots_v.num_basis())
    throw Error(ErrorCode::InvalidGeometry, "control net size does not match knot vectors");
  const auto count = static_cast<std::size_t>(net.n * net.m);
  if (net.points.size() != count || net.weights.size() != count)
    throw Error(ErrorCode::InvalidGeometry, "control net storage has wrong length");
  for (double w : net.weights)
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidGeometry, "weights must be strictly positive");
}

BasisEval2D eval_rational_2d(const KnotVector& ku, const KnotVector& kv,
                             const std::vector<double>& weights, double xi, double eta,
                             int nderiv) {
  const int p = ku.degree(), q = kv.degree();
  const int m = kv.num_basis();
  const int nd = std::min(nderiv, 1);
  const auto bu = eval_basis_1d(ku, xi, nd);
  const auto bv = eval_basis_1d(kv, eta, nd);
  const int nloc = (p + 1) * (q + 1);

  BasisEval2D out;
  out.indices.resize(static_cast<std::size_t>(nloc));
  out.values.resize(nloc);
  out.d_xi = Eigen::VectorXd::Zero(nloc);
  out.d_eta = Eigen::VectorXd::Zero(nloc);
  double W = 0.0, Wx = 0.0, We = 0.0;
  for (int a = 0; a <= p; ++a) {
    for (int b = 0; b <= q; ++b) {
      const int l = a * (q + 1) + b;
      const int gi = (bu.first + a) * m + (bv.first + b);
      out.indices[static_cast<std::size_t>(l)] = gi;
      const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(gi)];
      const double N = bu.ders(0, a) * bv.ders(0, b) * w;
      out.values[l] = N;
      W += N;
      if (nd > 0) {
        out.d_xi[l] = bu.ders(1, a) * bv.ders(0, b) * w;
        out.d_eta[l] = bu.ders(0, a) * bv.ders(1, b) * w;
        Wx += out.d_xi[l];
        We += out.d_eta[l];
      }
    }
  }
  if (nd > 0) {
    out.d_xi = (out.d_xi - out.values * (Wx / W)) / W;
    out.d_eta = (out.d_eta - out.values * (We / W)) / W;
  }
  out.values /= W;
  out.W = W;
  out.dW_xi = Wx;
  out.dW_eta = We;
  return out;
}

SurfaceEval eval_surface(const SurfacePatch& patch, double xi, double eta, int nderiv) {
  SurfaceEval out;
  out.basis = eval_rational_2d(patch.knots_u, patch.knots_v, patch.net.weights, xi, eta,
                               std::max(nderiv, 1));
  out.point.setZero();
  out.jacobian.setZero();
  const auto& b = out.basis;
  for (std::size_t l = 0; l < b.indices.size(); ++l) {
    const auto& X = patch.net.points[static_cast<std::size_t>(b.indices[l])];
    const auto li = static_cast<Eigen::Index>(l);
    out.point += b.values[li] * X;
    out.jacobian(0, 0) += b.d_xi[li] * X.x();
    out.jacobian(1, 0) += b.d_xi[li] * X.y();
    out.jacobian(0, 1) += b.d_eta[li] * X.x();
    out.jacobian(1, 1) += b.d_eta[li] * X.y();
  }
  out.det = out.jacobian.determinant();
  return out;
}

KnotVector elevated_knot_vector(const KnotVector& kv, int dp) {
  if (dp == 0) return kv;
  std::vector<double> v;
  for (double b : kv.breakpoints()) {
    const int c = kv.multiplicity(b) + dp;
    v.insert(v.end(), static_cast<std::size_t>(c), b);
  }
  return validate_knot_vector(std::move(v), kv.degree() + dp);
}

KnotVector inserted_knot_vector(const KnotVector& kv, const std::vector<double>& knots) {
  std::vector<double> v = kv.values();
  for (double x : knots) {
    if (!(x > kv.front() && x < kv.back()))
      throw Error(ErrorCode::OutOfDomain, "inserted knot " + std::to_string(x) + " not interior");
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
  }
  for (double x : knots) {
    if (std::count(v.begin(), v.end(), x) > kv.degree())
      throw Error(ErrorCode::MultiplicityOverflow,
                  "knot " + std::to_string(x) + " would exceed multiplicity p");
  }
  return validate_knot_vector(std::move(v), kv.degree());
}

Eigen::MatrixXd transfer_matrix(const KnotVector& coarse, const KnotVector& fine) {
  // The coarse space is nested in the fine one, so a least-squares fit on
  // per-span Gauss points recovers the exact coefficients.
  const auto bp = fine.breakpoints();
  const int npt = fine.degree() + 1;
  const int rows = npt * static_cast<int>(bp.size() - 1);
  Eigen::MatrixXd Bf(rows, fine.num_basis()), Bc(rows, coarse.num_basis());
  int r = 0;
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const auto g = gauss_on_interval(npt, bp[s], bp[s + 1]);
    for (double x : g.points) {
      Bf.row(r) = basis_row(fine, x);
      Bc.row(r) = basis_row(coarse, x);
      ++r;
    }
  }
  Eigen::MatrixXd T = Bf.colPivHouseholderQr().solve(Bc);
  T = T.unaryExpr([](double x) { return std::abs(x) < 1e-15 ? 0.0 : x; });
  return T;
}

namespace {

// Apply Tu (rows over xi) and Tv (rows over eta) to homogeneous coordinates.
SurfacePatch transfer_patch(const SurfacePatch& patch, const KnotVector& ku, const KnotVector& kv) {
  const Eigen::MatrixXd Tu = transfer_matrix(patch.knots_u, ku);
  const Eigen::MatrixXd Tv = transfer_matrix(patch.knots_v, kv);
  const int n = patch.net.n, m = patch.net.m;
  SurfacePatch out;
  out.knots_u = ku;
  out.knots_v = kv;
  out.net.n = ku.num_basis();
  out.net.m = kv.num_basis();
  for (int c = 0; c < 4; ++c) {
    Eigen::MatrixXd P(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        const double w = patch.net.weight(i, j);
        P(i, j) = c < 3 ? patch.net.point(i, j)[c] * w : w;
      }
    const Eigen::MatrixXd Q = Tu * P * Tv.transpose();
    if (c == 0) {
      out.net.points.assign(static_cast<std::size_t>(out.net.n * out.net.m), Eigen::Vector3d::Zero());
      out.net.weights.assign(out.net.points.size(), 0.0);
    }
    for (int i = 0; i < out.net.n; ++i)
      for (int j = 0; j < out.net.m; ++j) {
        const auto k = static_cast<std::size_t>(out.net.index(i, j));
        if (c < 3)
          out.net.points[k][c] = Q(i, j);
        else
          out.net.weights[k] = Q(i, j);
      }
  }
  for (std::size_t k = 0; k < out.net.points.size(); ++k) out.net.points[k] /= out.net.weights[k];
  validate_patch(out);
  return out;
}

}  // namespace

SurfacePatch insert_knots(const SurfacePatch& patch, const std::vector<double>& new_u,
                          const std::vector<double>& new_v) {
  if (new_u.empty() && new_v.empty()) return patch;
  const auto ku = inserted_knot_vector(patch.knots_u, new_u);
  const auto kv = inserted_knot_vector(patch.knots_v, new_v);
  return transfer_patch(patch, ku, kv);
}

SurfacePatch elevate_degree(const SurfacePatch& patch, int dp, int dq) {
  if (dp < 0 || dq < 0) throw Error(ErrorCode::DegreeTooLow, "elevation amounts must be non-negative");
  if (dp == 0 && dq == 0) return patch;
  return transfer_patch(patch, elevated_knot_vector(patch.knots_u, dp),
                        elevated_knot_vector(patch.knots_v, dq));
}

}  // namespace igaplate
