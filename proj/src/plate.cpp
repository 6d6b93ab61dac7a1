#include "igaplate/plate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "igaplate/error.hpp"
#include "igaplate/quadrature.hpp"

namespace igaplate {

PlateMaterial material(double E, double nu, double t, double kappa) {
  if (!(E > 0.0) || !(t > 0.0) || !(nu > -1.0 && nu < 0.5) || !(kappa > 0.0))
    throw Error(ErrorCode::InvalidMaterial, "require E > 0, t > 0, kappa > 0, -1 < nu < 0.5");
  PlateMaterial m;
  m.E = E;
  m.nu = nu;
  m.t = t;
  m.kappa = kappa;
  m.G = E / (2.0 * (1.0 + nu));
  const double D = m.bending_stiffness();
  m.D_M << D, D * nu, 0.0, D * nu, D, 0.0, 0.0, 0.0, D * (1.0 - nu) / 2.0;
  m.D_S = m.kGt() * Eigen::Matrix2d::Identity();
  return m;
}

KnotVector derivative_knot_vector(const KnotVector& kv) {
  if (kv.degree() < 1) throw Error(ErrorCode::DegreeTooLow, "derivative space needs p >= 1");
  const auto& v = kv.values();
  return validate_knot_vector(std::vector<double>(v.begin() + 1, v.end() - 1), kv.degree() - 1);
}

namespace {

// Knots present in `target` but not (or less often) in `source`.
std::vector<double> missing_knots(const KnotVector& source, const KnotVector& target) {
  std::vector<double> out;
  for (double b : target.breakpoints()) {
    const int extra = target.multiplicity(b) - source.multiplicity(b);
    for (int k = 0; k < extra; ++k) out.push_back(b);
  }
  return out;
}

std::vector<double> dyadic_knots(const KnotVector& kv, int level) {
  std::vector<double> out;
  const int sub = 1 << level;
  const auto bp = kv.breakpoints();
  for (std::size_t s = 0; s + 1 < bp.size(); ++s)
    for (int k = 1; k < sub; ++k) out.push_back(bp[s] + (bp[s + 1] - bp[s]) * k / sub);
  return out;
}

bool all_unit(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
}

// F(a, i) = integral of Nr_a N_i over the common breakpoints.
Eigen::MatrixXd mixed_gram(const KnotVector& reduced, const KnotVector& full) {
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(reduced.num_basis(), full.num_basis());
  const auto bp = full.breakpoints();
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const auto g = gauss_on_interval(full.degree() + 1, bp[s], bp[s + 1]);
    for (std::size_t k = 0; k < g.points.size(); ++k)
      F += g.weights[k] * basis_row(reduced, g.points[k]).transpose() * basis_row(full, g.points[k]);
  }
  return F;
}

// L2 projection of the geometry weight function onto a shear space that
// is reduced along one direction (0 = xi, 1 = eta).
std::vector<double> projected_weights(const SurfacePatch& geo, const SplineSpace& shear, int dir) {
  const int n = geo.net.n, m = geo.net.m;
  Eigen::MatrixXd w(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) w(i, j) = geo.net.weight(i, j);
  Eigen::MatrixXd C;
  if (dir == 0) {
    const Eigen::MatrixXd F = mixed_gram(shear.ku, geo.knots_u);
    C = gram_matrix(shear.ku).ldlt().solve(F * w);
  } else {
    const Eigen::MatrixXd F = mixed_gram(shear.kv, geo.knots_v);
    C = gram_matrix(shear.kv).ldlt().solve(F * w.transpose()).transpose();
  }
  std::vector<double> out(static_cast<std::size_t>(C.size()));
  for (int i = 0; i < C.rows(); ++i)
    for (int j = 0; j < C.cols(); ++j) {
      const double v = C(i, j);
      if (!(v > 0.0))
        throw Error(ErrorCode::InvalidGeometry, "projected shear weight is not positive");
      out[static_cast<std::size_t>(i * C.cols() + j)] = v;
    }
  return out;
}

}  // namespace

SurfacePatch refine_patch(const SurfacePatch& coarse, const RefineOptions& opt) {
  validate_patch(coarse);
  SurfacePatch p = coarse;
  if (opt.continuity_reduction) {
    const auto ru = reduce_continuity(p.knots_u, opt.mode);
    const auto rv = reduce_continuity(p.knots_v, opt.mode);
    p = insert_knots(p, missing_knots(p.knots_u, ru), missing_knots(p.knots_v, rv));
  }
  p = elevate_degree(p, std::max(0, opt.degree - p.degree_u()), std::max(0, opt.degree - p.degree_v()));
  return insert_knots(p, dyadic_knots(p.knots_u, opt.level), dyadic_knots(p.knots_v, opt.level));
}

FieldSpaces build_field_spaces(const SurfacePatch& coarse, const RefineOptions& opt) {
  FieldSpaces fs;
  fs.geometry = refine_patch(coarse, opt);
  const auto& g = fs.geometry;
  fs.disp.ku = g.knots_u;
  fs.disp.kv = g.knots_v;
  if (!all_unit(g.net.weights)) fs.disp.weights = g.net.weights;
  fs.has_shear = opt.with_shear;
  if (!opt.with_shear) return fs;
  if (g.degree_u() < 2 || g.degree_v() < 2)
    throw Error(ErrorCode::DegreeTooLow, "mixed formulations need degree >= 2");
  fs.shear1.ku = derivative_knot_vector(g.knots_u);
  fs.shear1.kv = g.knots_v;
  fs.shear2.ku = g.knots_u;
  fs.shear2.kv = derivative_knot_vector(g.knots_v);
  if (opt.shear_weights == WeightMode::nurbs && !fs.disp.weights.empty()) {
    fs.shear1.weights = projected_weights(g, fs.shear1, 0);
    fs.shear2.weights = projected_weights(g, fs.shear2, 1);
  }
  return fs;
}

Discretization discretize(std::vector<FieldSpaces> spaces) {
  Discretization d;
  std::vector<SurfacePatch> geo;
  for (const auto& s : spaces) geo.push_back(s.geometry);
  d.dofs = build_dof_map(geo);
  d.spaces = std::move(spaces);
  for (const auto& s : d.spaces) {
    d.s1_offset.push_back(d.n_s1);
    d.n_s1 += s.has_shear ? s.shear1.size() : 0;
  }
  for (const auto& s : d.spaces) {
    d.s2_offset.push_back(d.n_s2);
    d.n_s2 += s.has_shear ? s.shear2.size() : 0;
  }
  return d;
}

Discretization discretize(const std::vector<SurfacePatch>& coarse, const RefineOptions& opt) {
  std::vector<FieldSpaces> spaces;
  for (const auto& p : coarse) spaces.push_back(build_field_spaces(p, opt));
  return discretize(std::move(spaces));
}

std::vector<ElementDomain> patch_elements(const FieldSpaces& spaces, int patch_index) {
  std::vector<ElementDomain> out;
  const auto bu = spaces.geometry.knots_u.breakpoints();
  const auto bv = spaces.geometry.knots_v.breakpoints();
  for (std::size_t a = 0; a + 1 < bu.size(); ++a)
    for (std::size_t b = 0; b + 1 < bv.size(); ++b)
      out.push_back({patch_index, bu[a], bu[a + 1], bv[b], bv[b + 1]});
  return out;
}

ElementMatrices element_matrices(const ElementDomain& elem, const FieldSpaces& spaces,
                                 const PlateMaterial& mat, Scheme scheme,
                                 const LoadFunction& load, int quad_extra) {
  const auto& geo = spaces.geometry;
  const int p = geo.degree_u(), q = geo.degree_v();
  const int nd = (p + 1) * (q + 1);
  const bool mixed = scheme != Scheme::primal;
  if (mixed && !spaces.has_shear)
    throw Error(ErrorCode::DegreeTooLow, "mixed scheme requires shear spaces");
  const int n1 = mixed ? p * (q + 1) : 0;
  const int n2 = mixed ? (p + 1) * q : 0;

  ElementMatrices em;
  em.Kdd = Eigen::MatrixXd::Zero(3 * nd, 3 * nd);
  em.KdS1 = Eigen::MatrixXd::Zero(3 * nd, n1);
  em.KdS2 = Eigen::MatrixXd::Zero(3 * nd, n2);
  em.KS1d = Eigen::MatrixXd::Zero(n1, 3 * nd);
  em.KS2d = Eigen::MatrixXd::Zero(n2, 3 * nd);
  em.KS1S1 = Eigen::MatrixXd::Zero(n1, n1);
  em.KS2S2 = Eigen::MatrixXd::Zero(n2, n2);
  em.fw = Eigen::VectorXd::Zero(nd);

  const auto gu = gauss_on_interval(p + 1 + quad_extra, elem.u0, elem.u1);
  const auto gv = gauss_on_interval(q + 1 + quad_extra, elem.v0, elem.v1);
  const double kGt = mat.kGt();

  Eigen::MatrixXd Bb(3, 3 * nd), Bs(2, 3 * nd);
  for (std::size_t a = 0; a < gu.points.size(); ++a) {
    for (std::size_t b = 0; b < gv.points.size(); ++b) {
      const double xi = gu.points[a], eta = gv.points[b];
      const double wJS = gu.weights[a] * gv.weights[b];  // parametric weight incl. J_S
      const auto se = eval_surface(geo, xi, eta, 1);
      if (!(se.det > 0.0))
        throw Error(ErrorCode::DegenerateJacobian,
                    "non-positive Jacobian at (" + std::to_string(xi) + ", " + std::to_string(eta) + ")");
      if (em.nodes.empty()) em.nodes = se.basis.indices;
      const double wJ = wJS * se.det;
      const Eigen::Matrix2d JinvT = se.jacobian.inverse().transpose();
      const Eigen::VectorXd& R = se.basis.values;
      Eigen::MatrixXd grad(2, nd);
      grad.row(0) = se.basis.d_xi.transpose();
      grad.row(1) = se.basis.d_eta.transpose();
      grad = JinvT * grad;  // rows d/dx, d/dy

      Bb.setZero();
      Bs.setZero();
      for (int l = 0; l < nd; ++l) {
        const int t1 = nd + 2 * l, t2 = t1 + 1;
        Bb(0, t1) = grad(0, l);
        Bb(1, t2) = grad(1, l);
        Bb(2, t1) = grad(1, l);
        Bb(2, t2) = grad(0, l);
        Bs(0, l) = grad(0, l);
        Bs(1, l) = grad(1, l);
        Bs(0, t1) = -R[l];
        Bs(1, t2) = -R[l];
      }
      em.Kdd.noalias() += Bb.transpose() * mat.D_M * Bb * wJ;
      const double fval = load ? load(se.point.x(), se.point.y()) : 0.0;
      em.fw += R * (fval * wJ);
      if (!mixed) {
        em.Kdd.noalias() += Bs.transpose() * mat.D_S * Bs * wJ;
        continue;
      }
      const auto e1 = eval_rational_2d(spaces.shear1.ku, spaces.shear1.kv, spaces.shear1.weights, xi, eta, 0);
      const auto e2 = eval_rational_2d(spaces.shear2.ku, spaces.shear2.kv, spaces.shear2.weights, xi, eta, 0);
      if (em.s1.empty()) {
        em.s1 = e1.indices;
        em.s2 = e2.indices;
      }
      // Bs row alpha is the shear strain (grad w - Theta)_alpha.
      em.KdS1.noalias() += Bs.row(0).transpose() * e1.values.transpose() * wJ;
      em.KdS2.noalias() += Bs.row(1).transpose() * e2.values.transpose() * wJ;
      if (scheme == Scheme::galerkin) {
        em.KS1S1.noalias() += e1.values * e1.values.transpose() * (wJ / kGt);
        em.KS2S2.noalias() += e2.values * e2.values.transpose() * (wJ / kGt);
      } else {
        const double w1 = e1.W * e1.W * wJS, w2 = e2.W * e2.W * wJS;
        em.KS1d.noalias() -= e1.values * Bs.row(0) * (kGt * w1);
        em.KS2d.noalias() -= e2.values * Bs.row(1) * (kGt * w2);
        em.KS1S1.noalias() += e1.values * e1.values.transpose() * w1;
        em.KS2S2.noalias() += e2.values * e2.values.transpose() * w2;
      }
    }
  }
  if (mixed && scheme == Scheme::galerkin) {
    em.KS1d = -em.KdS1.transpose();
    em.KS2d = -em.KdS2.transpose();
  }
  return em;
}

MixedSystem assemble(const Discretization& disc, const PlateMaterial& mat, Scheme scheme,
                     const LoadFunction& load, bool keep_elements, int quad_extra) {
  MixedSystem sys;
  sys.scheme = scheme;
  sys.n_nodes = disc.n_nodes();
  const bool mixed = scheme != Scheme::primal;
  sys.n_s1 = mixed ? disc.n_s1 : 0;
  sys.n_s2 = mixed ? disc.n_s2 : 0;
  const int N = sys.n_nodes, nD = sys.n_d();
  sys.f = Eigen::VectorXd::Zero(nD);

  std::vector<Triplet> tdd, tdS1, tdS2, tS1d, tS2d, tS1S1, tS2S2;
  auto scatter = [](std::vector<Triplet>& out, const Eigen::MatrixXd& M, const std::vector<int>& r,
                    const std::vector<int>& c) {
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (M(i, j) != 0.0) out.emplace_back(r[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)], M(i, j));
  };

  for (std::size_t pi = 0; pi < disc.spaces.size(); ++pi) {
    const auto& fs = disc.spaces[pi];
    const auto& nmap = disc.dofs.node_map[pi];
    for (const auto& el : patch_elements(fs, static_cast<int>(pi))) {
      const auto em = element_matrices(el, fs, mat, scheme, load, quad_extra);
      const int nd = static_cast<int>(em.nodes.size());
      std::vector<int> d(static_cast<std::size_t>(3 * nd));
      for (int l = 0; l < nd; ++l) {
        const int node = nmap[static_cast<std::size_t>(em.nodes[static_cast<std::size_t>(l)])];
        d[static_cast<std::size_t>(l)] = w_dof(node);
        d[static_cast<std::size_t>(nd + 2 * l)] = theta_dof(N, node, 0);
        d[static_cast<std::size_t>(nd + 2 * l + 1)] = theta_dof(N, node, 1);
        sys.f[node] += em.fw[l];
      }
      scatter(tdd, em.Kdd, d, d);
      if (!mixed) continue;
      std::vector<int> s1 = em.s1, s2 = em.s2;
      for (int& s : s1) s += disc.s1_offset[pi];
      for (int& s : s2) s += disc.s2_offset[pi];
      scatter(tdS1, em.KdS1, d, s1);
      scatter(tdS2, em.KdS2, d, s2);
      scatter(tS1d, em.KS1d, s1, d);
      scatter(tS2d, em.KS2d, s2, d);
      scatter(tS1S1, em.KS1S1, s1, s1);
      scatter(tS2S2, em.KS2S2, s2, s2);
      if (keep_elements)
        sys.elements.push_back({static_cast<int>(pi), d, s1, s2, em.KS1d, em.KS2d, em.KS1S1, em.KS2S2});
    }
  }
  sys.Kdd = assemble_sorted(nD, nD, std::move(tdd));
  sys.KdS1 = assemble_sorted(nD, sys.n_s1, std::move(tdS1));
  sys.KdS2 = assemble_sorted(nD, sys.n_s2, std::move(tdS2));
  sys.KS1d = assemble_sorted(sys.n_s1, nD, std::move(tS1d));
  sys.KS2d = assemble_sorted(sys.n_s2, nD, std::move(tS2d));
  sys.KS1S1 = assemble_sorted(sys.n_s1, sys.n_s1, std::move(tS1S1));
  sys.KS2S2 = assemble_sorted(sys.n_s2, sys.n_s2, std::move(tS2S2));
  sys.free_dofs.resize(static_cast<std::size_t>(nD));
  for (int k = 0; k < nD; ++k) sys.free_dofs[static_cast<std::size_t>(k)] = k;
  return sys;
}

BcReport apply_clamped_bc(MixedSystem& system, const Discretization& disc) {
  const int N = system.n_nodes;
  std::vector<char> fixed(static_cast<std::size_t>(system.n_d()), 0);
  for (int node = 0; node < N; ++node) {
    if (!disc.dofs.clamped[static_cast<std::size_t>(node)]) continue;
    fixed[static_cast<std::size_t>(w_dof(node))] = 1;
    fixed[static_cast<std::size_t>(theta_dof(N, node, 0))] = 1;
    fixed[static_cast<std::size_t>(theta_dof(N, node, 1))] = 1;
  }
  system.free_dofs.clear();
  system.fixed_dofs.clear();
  for (int k = 0; k < system.n_d(); ++k)
    (fixed[static_cast<std::size_t>(k)] ? system.fixed_dofs : system.free_dofs).push_back(k);
  return {static_cast<int>(system.fixed_dofs.size()), static_cast<int>(system.free_dofs.size())};
}

SpMat saddle_matrix(const MixedSystem& sys) {
  std::vector<int> all1(static_cast<std::size_t>(sys.n_s1)), all2(static_cast<std::size_t>(sys.n_s2));
  for (int k = 0; k < sys.n_s1; ++k) all1[static_cast<std::size_t>(k)] = k;
  for (int k = 0; k < sys.n_s2; ++k) all2[static_cast<std::size_t>(k)] = k;
  const auto& fr = sys.free_dofs;
  const int nf = static_cast<int>(fr.size());
  const int o1 = nf, o2 = nf + sys.n_s1, n = nf + sys.n_s1 + sys.n_s2;
  std::vector<Triplet> trip;
  auto put = [&trip](const SpMat& B, int r0, int c0) {
    for (int k = 0; k < B.outerSize(); ++k)
      for (SpMat::InnerIterator it(B, k); it; ++it)
        trip.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), it.value());
  };
  put(submatrix(sys.Kdd, fr, fr), 0, 0);
  put(submatrix(sys.KdS1, fr, all1), 0, o1);
  put(submatrix(sys.KdS2, fr, all2), 0, o2);
  put(submatrix(sys.KS1d, all1, fr), o1, 0);
  put(submatrix(sys.KS2d, all2, fr), o2, 0);
  put(sys.KS1S1, o1, o1);
  put(sys.KS2S2, o2, o2);
  return assemble_sorted(n, n, std::move(trip));
}

}  // namespace igaplate
