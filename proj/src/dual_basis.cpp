#include "igaplate/dual_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <tuple>

#include "igaplate/basis.hpp"
#include "igaplate/error.hpp"
#include "igaplate/quadrature.hpp"

namespace igaplate {

KnotVector reduce_continuity(const KnotVector& kv, ContinuityMode mode) {
  const int p = kv.degree();
  std::vector<double> v;
  const auto bp = kv.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    int c = kv.multiplicity(bp[k]);
    if (k > 0 && k + 1 < bp.size()) {
      if (mode == ContinuityMode::all_knots)
        c = std::max(c, std::min(c + 1, p));
      else if (c < p)
        c = c + 1;
    }
    v.insert(v.end(), static_cast<std::size_t>(c), bp[k]);
  }
  return validate_knot_vector(std::move(v), p);
}

Eigen::VectorXd basis_moments(const KnotVector& kv, const std::function<double(double)>& f,
                              int extra_degree) {
  const int p = kv.degree();
  const int npt = (p + extra_degree) / 2 + 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(kv.num_basis());
  const auto bp = kv.breakpoints();
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const auto g = gauss_on_interval(npt, bp[s], bp[s + 1]);
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const auto e = eval_basis_1d(kv, g.points[k], 0);
      const double fw = f(g.points[k]) * g.weights[k];
      b.segment(e.first, p + 1) += fw * e.ders.row(0).transpose();
    }
  }
  return b;
}

Eigen::MatrixXd gram_matrix(const KnotVector& kv) {
  const int p = kv.degree();
  const int n = kv.num_basis();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  const auto bp = kv.breakpoints();
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const auto g = gauss_on_interval(p + 1, bp[s], bp[s + 1]);
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const auto e = eval_basis_1d(kv, g.points[k], 0);
      const Eigen::VectorXd N = e.ders.row(0).transpose();
      G.block(e.first, e.first, p + 1, p + 1) += g.weights[k] * N * N.transpose();
    }
  }
  return G;
}

Eigen::VectorXd basis_integrals(const KnotVector& kv) {
  return basis_moments(kv, [](double) { return 1.0; }, 0);
}

Eigen::VectorXd project_to_spline(const KnotVector& kv, const std::function<double(double)>& f,
                                  int extra_degree) {
  return gram_matrix(kv).ldlt().solve(basis_moments(kv, f, extra_degree));
}

namespace {

std::vector<std::pair<double, int>> limited_knots(const KnotVector& kv) {
  std::vector<std::pair<double, int>> out;
  for (const auto& e : continuity_profile(kv))
    if (e.multiplicity >= 2) out.emplace_back(e.knot, e.multiplicity);
  return out;
}

// Polar form of x^k for degree p = u.size(): e_k(u) / binom(p, k).
double polar_monomial(const std::vector<double>& u, int k) {
  const int p = static_cast<int>(u.size());
  std::vector<double> e(static_cast<std::size_t>(k + 1), 0.0);
  e[0] = 1.0;
  for (int q = 0; q < p; ++q)
    for (int m = std::min(k, q + 1); m >= 1; --m) e[static_cast<std::size_t>(m)] += u[static_cast<std::size_t>(q)] * e[static_cast<std::size_t>(m - 1)];
  double binom = 1.0;
  for (int m = 1; m <= k; ++m) binom = binom * (p - k + m) / m;
  return e[static_cast<std::size_t>(k)] / binom;
}

DualTransform1D build_dual(const KnotVector& kv, int r, DualVariant variant, int wide_band) {
  const int p = kv.degree();
  const int n = kv.num_basis();
  const Eigen::MatrixXd G = gram_matrix(kv);
  const auto targets = dual_targets(kv, r, variant);

  std::set<int> wide;
  if (variant == DualVariant::eAD) {
    for (const auto& [v, c] : limited_knots(kv))
      for (int i = 0; i < n; ++i)
        if (kv[i] <= v && v <= kv[i + p + 1]) wide.insert(i);
  }

  // Unknowns: upper band entries (a <= b).
  std::vector<std::pair<int, int>> pairs;
  std::map<std::pair<int, int>, int> slot;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const int lim = (wide.count(a) || wide.count(b)) ? wide_band : r;
      if (b - a <= lim) {
        slot[{a, b}] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
    }
  const int nu = static_cast<int>(pairs.size());

  // Constraints S (G a) = a for each target's coefficient vector a. Row i uses
  // targets centred and scaled on its own support so that the equations stay
  // well conditioned under refinement; coefficients come from the blossom.
  std::vector<std::pair<double, int>> shapes;  // (knot, k); knot = NaN for monomials
  for (int k = 0; k <= r; ++k) shapes.emplace_back(std::nan(""), k);
  if (variant == DualVariant::eAD)
    for (const auto& [v, c] : limited_knots(kv))
      for (int k = std::max(0, p - c + 1); k <= p; ++k) shapes.emplace_back(v, k);
  const int nt = static_cast<int>(shapes.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n * nt, nu);
  Eigen::VectorXd d(n * nt);
  for (int i = 0; i < n; ++i) {
    const double L = kv[i + p + 1] - kv[i];
    const double centre = 0.5 * (kv[i] + kv[i + p + 1]);
    const int j0 = std::max(0, i - wide_band), j1 = std::min(n - 1, i + wide_band);
    const int l0 = std::max(0, j0 - p), l1 = std::min(n - 1, j1 + p);
    for (int t = 0; t < nt; ++t) {
      const auto [v, k] = shapes[static_cast<std::size_t>(t)];
      const bool truncated = !std::isnan(v);
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      for (int l = l0; l <= l1; ++l) {
        if (truncated && kv[l] < v) continue;
        std::vector<double> u(static_cast<std::size_t>(p));
        for (int q = 0; q < p; ++q) u[static_cast<std::size_t>(q)] = (kv[l + 1 + q] - (truncated ? v : centre)) / L;
        a[l] = polar_monomial(u, k);
      }
      const int row = t * n + i;
      d[row] = a[i];
      for (int j = j0; j <= j1; ++j) {
        auto it = slot.find({std::min(i, j), std::max(i, j)});
        if (it == slot.end()) continue;
        double g = 0.0;
        for (int l = std::max(l0, j - p); l <= std::min(l1, j + p); ++l) g += G(j, l) * a[l];
        C(row, it->second) += g;
      }
    }
  }
  std::vector<Eigen::VectorXd> moments;
  for (const auto& tf : targets) moments.push_back(basis_moments(kv, tf.f, tf.degree));

  // Objective on the free directions: ||S G - I||_F^2 plus a penalty on far
  // off-diagonal entries. The penalty grows like the distance to the power
  // 2(r+1), which is how such entries enter the local approximation error.
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
  for (int k = 0; k < nu; ++k) {
    const auto [a, b] = pairs[static_cast<std::size_t>(k)];
    for (int c = 0; c < n; ++c) {
      if (G(b, c) != 0.0) trip.emplace_back(a * n + c, k, G(b, c));
      if (a != b && G(a, c) != 0.0) trip.emplace_back(b * n + c, k, G(a, c));
    }
    rhs[k] = a == b ? G(a, a) : 2.0 * G(a, b);
  }
  Eigen::SparseMatrix<double> M(n * n, nu);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::MatrixXd H = Eigen::MatrixXd(M.transpose() * M);
  const double h = (kv.back() - kv.front()) / kv.num_spans();
  for (int k = 0; k < nu; ++k) {
    const auto [a, b] = pairs[static_cast<std::size_t>(k)];
    H(k, k) += std::pow(1.0 + (b - a), 2.0 * (r + 1)) * h * h * (a == b ? 1.0 : 2.0);
  }

  // The constraint spectrum decays steadily under refinement, so only exact
  // redundancies are dropped.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv[rank] > 1e-14 * smax) ++rank;
  const Eigen::MatrixXd& V = svd.matrixV();
  Eigen::VectorXd x = V.leftCols(rank) *
                      ((svd.matrixU().leftCols(rank).transpose() * d).array() /
                       sv.head(rank).array())
                          .matrix();
  if (rank < nu) {
    const Eigen::MatrixXd Z = V.rightCols(nu - rank);
    const Eigen::MatrixXd A = Z.transpose() * H * Z;
    const Eigen::VectorXd y = A.ldlt().solve(Z.transpose() * (rhs - H * x));
    x += Z * y;
  }

  DualTransform1D out;
  out.S = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < nu; ++k) {
    const auto [a, b] = pairs[static_cast<std::size_t>(k)];
    out.S(a, b) = x[k];
    out.S(b, a) = x[k];
  }
  out.variant = variant;
  out.r = r;
  out.knots = kv;

  // Verify reproduction: sum_j (int f lambda_j) N_j(x) = f(x) on samples.
  double err = 0.0;
  for (int t = 0; t < nt; ++t) {
    const Eigen::VectorXd c = out.S * moments[static_cast<std::size_t>(t)];
    for (int s = 0; s <= 50; ++s) {
      const double xs = kv.front() + (kv.back() - kv.front()) * s / 50.0;
      err = std::max(err, std::abs(basis_row(kv, xs).dot(c) - targets[t].f(xs)));
    }
  }
  out.reproduction_error = err;
  if (!(err <= 1e-8))
    throw Error(ErrorCode::ReproductionFailure,
                "dual basis reproduction error " + std::to_string(err) + " exceeds 1e-8");
  return out;
}

}  // namespace

std::vector<TargetFunction> dual_targets(const KnotVector& kv, int r, DualVariant variant) {
  const int p = kv.degree();
  std::vector<TargetFunction> out;
  for (int k = 0; k <= r; ++k)
    out.push_back({[k](double x) { return std::pow(x, k); }, k});
  if (variant == DualVariant::eAD) {
    for (const auto& [v, c] : limited_knots(kv)) {
      for (int k = std::max(0, p - c + 1); k <= p; ++k) {
        out.push_back({[k, v = v](double x) {
                         // Half-open spans: the jump belongs to the right piece.
                         if (x < v) return 0.0;
                         return k == 0 ? 1.0 : std::pow(x - v, k);
                       },
                       k});
      }
    }
  }
  return out;
}

DualTransform1D dual_transform_1d(const KnotVector& kv, int r, DualVariant variant) {
  if (r < 0 || r > kv.degree())
    throw Error(ErrorCode::DegreeTooLow, "reproduction degree must lie in [0, p]");
  using Key = std::tuple<std::vector<double>, int, int, int>;
  static std::mutex mutex;
  static std::map<Key, DualTransform1D> cache;
  const Key key{kv.values(), kv.degree(), r, static_cast<int>(variant)};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  // Limited knots packed closer than the r + p band allows (coarse
  // meshes) leave the constraints infeasible; widen those rows step by step.
  DualTransform1D out;
  for (int band = r + kv.degree();; band += kv.degree()) {
    try {
      out = build_dual(kv, r, variant, band);
      break;
    } catch (const Error& e) {
      if (variant != DualVariant::eAD || e.code() != ErrorCode::ReproductionFailure || band >= kv.num_basis() - 1)
        throw;
    }
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, out);
  return out;
}

DualTransform2D dual_transform_2d(const DualTransform1D& Su, const DualTransform1D& Sv,
                                  const std::vector<double>* weights) {
  const int n = static_cast<int>(Su.S.rows()), m = static_cast<int>(Sv.S.rows());
  DualTransform2D out;
  out.n = n;
  out.m = m;
  if (weights && static_cast<int>(weights->size()) != n * m)
    throw Error(ErrorCode::DimensionMismatch, "weight count does not match the bivariate space");
  Eigen::VectorXd inv = Eigen::VectorXd::Ones(n * m);
  if (weights) {
    out.mode = WeightMode::nurbs;
    out.weights = Eigen::Map<const Eigen::VectorXd>(weights->data(), n * m);
    inv = out.weights.cwiseInverse();
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double su = Su.S(i, k);
      if (su == 0.0) continue;
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
          const double sv = Sv.S(j, l);
          if (sv == 0.0) continue;
          const int row = i * m + j, col = k * m + l;
          trip.emplace_back(row, col, inv[row] * su * sv * inv[col]);
        }
    }
  out.matrix.resize(n * m, n * m);
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  out.by_column = out.matrix;
  return out;
}

ElementTransform extract_element_transform(const DualTransform2D& S2d,
                                           const std::vector<int>& element_dofs) {
  ElementTransform out;
  out.cols = element_dofs;
  const Eigen::SparseMatrix<double> converted =
      S2d.by_column.nonZeros() == S2d.matrix.nonZeros() ? Eigen::SparseMatrix<double>() : Eigen::SparseMatrix<double>(S2d.matrix);
  const auto& colmajor = converted.size() ? converted : S2d.by_column;
  std::set<int> rows;
  for (int c : element_dofs)
    for (Eigen::SparseMatrix<double>::InnerIterator it(colmajor, c); it; ++it) rows.insert(static_cast<int>(it.row()));
  out.rows.assign(rows.begin(), rows.end());
  out.block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out.rows.size()),
                                    static_cast<Eigen::Index>(element_dofs.size()));
  for (std::size_t a = 0; a < out.rows.size(); ++a)
    for (std::size_t b = 0; b < element_dofs.size(); ++b)
      out.block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          S2d.matrix.coeff(out.rows[a], element_dofs[b]);
  return out;
}

}  // namespace igaplate
