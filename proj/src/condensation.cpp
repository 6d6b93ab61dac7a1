#include "igaplate/condensation.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "igaplate/error.hpp"

namespace igaplate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = k;
  return v;
}

SpMat diagonal_matrix(const Eigen::VectorXd& d) {
  std::vector<Triplet> trip;
  for (Eigen::Index k = 0; k < d.size(); ++k) trip.emplace_back(static_cast<int>(k), static_cast<int>(k), d[k]);
  SpMat D(d.size(), d.size());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::standard: return "std";
    case Variant::mxd: return "mxd";
    case Variant::lmp: return "lmp";
    case Variant::ad: return "ad";
    case Variant::ead: return "ead";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "std") return Variant::standard;
  if (name == "mxd") return Variant::mxd;
  if (name == "lmp") return Variant::lmp;
  if (name == "ad") return Variant::ad;
  if (name == "ead") return Variant::ead;
  throw Error(ErrorCode::InvalidConfig, "unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(WeightMode m) { return m == WeightMode::nurbs ? "nurbs" : "bspline"; }

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "nurbs") return WeightMode::nurbs;
  if (name == "bspline") return WeightMode::bspline;
  throw Error(ErrorCode::InvalidConfig, "unknown shear weighting '" + std::string(name) + "'");
}

Scheme scheme_for(Variant v) {
  switch (v) {
    case Variant::standard: return Scheme::primal;
    case Variant::mxd: return Scheme::galerkin;
    default: return Scheme::weighted;
  }
}

RefineOptions refine_options(const SolveConfig& cfg) {
  RefineOptions o;
  o.degree = cfg.degree;
  o.level = cfg.level;
  o.continuity_reduction = cfg.continuity_reduction;
  o.mode = cfg.variant == Variant::ead ? ContinuityMode::preserve_C0 : ContinuityMode::all_knots;
  o.shear_weights = cfg.shear_weights;
  o.with_shear = cfg.variant != Variant::standard;
  return o;
}

PatchTransforms build_transforms(const Discretization& disc, DualVariant variant) {
  PatchTransforms out;
  for (const auto& fs : disc.spaces) {
    auto make = [variant](const SplineSpace& sp) {
      const auto su = dual_transform_1d(sp.ku, sp.ku.degree(), variant);
      const auto sv = dual_transform_1d(sp.kv, sp.kv.degree(), variant);
      return dual_transform_2d(su, sv, sp.weights.empty() ? nullptr : &sp.weights);
    };
    out.t1.push_back(make(fs.shear1));
    out.t2.push_back(make(fs.shear2));
  }
  return out;
}

SpMat block_diagonal(const std::vector<DualTransform2D>& blocks, const std::vector<int>& offsets, int total) {
  std::vector<Triplet> trip;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& M = blocks[b].matrix;
    const int o = offsets[b];
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it)
        trip.emplace_back(o + static_cast<int>(it.row()), o + static_cast<int>(it.col()), it.value());
  }
  return assemble_sorted(total, total, std::move(trip));
}

MixedSystem pg_transform(const MixedSystem& system, const SpMat& T1, const SpMat& T2) {
  if (T1.rows() != system.n_s1 || T1.cols() != system.n_s1 || T2.rows() != system.n_s2 ||
      T2.cols() != system.n_s2)
    throw Error(ErrorCode::DimensionMismatch, "transform size does not match the shear spaces");
  MixedSystem out = system;
  out.elements.clear();
  out.KS1d = SpMat(T1 * system.KS1d);
  out.KS2d = SpMat(T2 * system.KS2d);
  out.KS1S1 = SpMat(T1 * system.KS1S1);
  out.KS2S2 = SpMat(T2 * system.KS2S2);
  return out;
}

MixedSystem pg_transform_elementwise(const MixedSystem& system, const PatchTransforms& transforms,
                                     const Discretization& disc) {
  if (system.elements.empty())
    throw Error(ErrorCode::DimensionMismatch, "element blocks were not retained at assembly");
  std::vector<Triplet> t1d, t2d, t11, t22;
  auto add = [](std::vector<Triplet>& out, const Eigen::MatrixXd& M, const std::vector<int>& rows,
                int row_offset, const std::vector<int>& cols) {
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (M(i, j) != 0.0)
          out.emplace_back(row_offset + rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)], M(i, j));
  };
  for (const auto& rec : system.elements) {
    const auto p = static_cast<std::size_t>(rec.patch);
    for (int comp = 0; comp < 2; ++comp) {
      const auto& glob = comp == 0 ? rec.s1 : rec.s2;
      const int off = comp == 0 ? disc.s1_offset[p] : disc.s2_offset[p];
      std::vector<int> local = glob;
      for (int& s : local) s -= off;
      const auto et = extract_element_transform(comp == 0 ? transforms.t1[p] : transforms.t2[p], local);
      const Eigen::MatrixXd Kd = et.block * (comp == 0 ? rec.KS1d : rec.KS2d);
      const Eigen::MatrixXd Ks = et.block * (comp == 0 ? rec.KS1S1 : rec.KS2S2);
      add(comp == 0 ? t1d : t2d, Kd, et.rows, off, rec.d);
      add(comp == 0 ? t11 : t22, Ks, et.rows, off, glob);
    }
  }
  MixedSystem out = system;
  out.elements.clear();
  out.KS1d = assemble_sorted(system.n_s1, system.n_d(), std::move(t1d));
  out.KS2d = assemble_sorted(system.n_s2, system.n_d(), std::move(t2d));
  out.KS1S1 = assemble_sorted(system.n_s1, system.n_s1, std::move(t11));
  out.KS2S2 = assemble_sorted(system.n_s2, system.n_s2, std::move(t22));
  return out;
}

LumpResult row_sum_lump(const SpMat& block, bool dual_identity) {
  if (block.rows() != block.cols()) throw Error(ErrorCode::DimensionMismatch, "lumping needs a square block");
  LumpResult out;
  const Eigen::VectorXd sums = block * Eigen::VectorXd::Ones(block.cols());
  if (dual_identity) {
    out.max_deviation = sums.size() ? (sums.array() - 1.0).abs().maxCoeff() : 0.0;
    out.diagonal = Eigen::VectorXd::Ones(sums.size());
    return out;
  }
  out.diagonal = sums;
  for (Eigen::Index k = 0; k < sums.size(); ++k)
    if (!(sums[k] > 0.0))
      throw Error(ErrorCode::NonPositiveDiagonal,
                  "lumped entry " + std::to_string(k) + " is " + std::to_string(sums[k]));
  return out;
}

CondensedSystem condense(const MixedSystem& sys, CondenseMode mode, const Eigen::VectorXd* D1,
                         const Eigen::VectorXd* D2) {
  CondensedSystem out;
  out.free_dofs = sys.free_dofs;
  out.n_d = sys.n_d();
  const auto& fr = sys.free_dofs;
  SpMat K = submatrix(sys.Kdd, fr, fr);
  out.f.resize(static_cast<Eigen::Index>(fr.size()));
  for (std::size_t k = 0; k < fr.size(); ++k) out.f[static_cast<Eigen::Index>(k)] = sys.f[fr[k]];

  for (int comp = 0; comp < 2; ++comp) {
    const int ns = comp == 0 ? sys.n_s1 : sys.n_s2;
    const auto all = iota_vec(ns);
    const SpMat KdS = submatrix(comp == 0 ? sys.KdS1 : sys.KdS2, fr, all);
    const SpMat KSd = submatrix(comp == 0 ? sys.KS1d : sys.KS2d, all, fr);
    const SpMat& KSS = comp == 0 ? sys.KS1S1 : sys.KS2S2;
    SpMat R;
    switch (mode) {
      case CondenseMode::identity:
        R = -KSd;
        break;
      case CondenseMode::diagonal: {
        const Eigen::VectorXd* D = comp == 0 ? D1 : D2;
        if (!D || D->size() != ns) throw Error(ErrorCode::DimensionMismatch, "missing lumped diagonal");
        R = -(diagonal_matrix(D->cwiseInverse()) * KSd);
        break;
      }
      case CondenseMode::unlumped: {
        if (ns == 0) {
          R = SpMat(0, static_cast<Eigen::Index>(fr.size()));
          break;
        }
        try {
          const DirectSolver solver(KSS);
          const Eigen::MatrixXd X = solver.solve(Eigen::MatrixXd(KSd));
          R = (-X).sparseView(1.0, 1e-300);
        } catch (const Error& e) {
          throw Error(ErrorCode::SingularShearBlock, e.what());
        }
        break;
      }
    }
    const SpMat KR = KdS * R;
    K = SpMat(K + KR);
    (comp == 0 ? out.R1 : out.R2) = R;
  }
  out.K = pruned(K, 0.0);
  return out;
}

ShearCoefficients recover_shear(const CondensedSystem& cond, const Eigen::VectorXd& d_free) {
  return {cond.R1 * d_free, cond.R2 * d_free};
}

Eigen::VectorXd expand_free(const std::vector<int>& free_dofs, int n_d, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_d);
  for (std::size_t k = 0; k < free_dofs.size(); ++k) out[free_dofs[k]] = x[static_cast<Eigen::Index>(k)];
  return out;
}

Solution solve_variant(const std::vector<SurfacePatch>& coarse, const SolveConfig& cfg,
                       const LoadFunction& load) {
  const auto t_asm = Clock::now();
  const PlateMaterial mat = material(cfg.E, cfg.nu, cfg.thickness, cfg.kappa);
  Solution sol;
  sol.disc = discretize(coarse, refine_options(cfg));
  MixedSystem sys = assemble(sol.disc, mat, scheme_for(cfg.variant), load);
  apply_clamped_bc(sys, sol.disc);
  const int nf = static_cast<int>(sys.free_dofs.size());
  sol.diag.n_dof_primal = nf;
  sol.diag.n_dof_mixed = nf + sol.disc.n_s1 + sol.disc.n_s2;
  if (cfg.variant == Variant::standard) {
    // The mixed count refers to the shear spaces the same mesh would carry.
    try {
      auto ro = refine_options(cfg);
      ro.with_shear = true;
      const auto mixed = discretize(coarse, ro);
      sol.diag.n_dof_mixed = nf + mixed.n_s1 + mixed.n_s2;
    } catch (const Error&) {
      sol.diag.n_dof_mixed = nf;
    }
  }

  SpMat A;
  Eigen::VectorXd rhs;
  CondensedSystem cond;
  bool condensed = false;
  bool monolithic = false;
  const bool unlumped = cfg.condensation == Condensation::unlumped;

  switch (cfg.variant) {
    case Variant::standard: {
      A = submatrix(sys.Kdd, sys.free_dofs, sys.free_dofs);
      rhs = Eigen::VectorXd(nf);
      for (int k = 0; k < nf; ++k) rhs[k] = sys.f[sys.free_dofs[static_cast<std::size_t>(k)]];
      break;
    }
    case Variant::mxd: {
      if (unlumped) {
        cond = condense(sys, CondenseMode::unlumped);
        condensed = true;
      } else {
        A = saddle_matrix(sys);
        rhs = Eigen::VectorXd::Zero(A.rows());
        for (int k = 0; k < nf; ++k) rhs[k] = sys.f[sys.free_dofs[static_cast<std::size_t>(k)]];
        monolithic = true;
      }
      break;
    }
    case Variant::lmp: {
      const auto l1 = row_sum_lump(sys.KS1S1, false);
      const auto l2 = row_sum_lump(sys.KS2S2, false);
      cond = unlumped ? condense(sys, CondenseMode::unlumped)
                      : condense(sys, CondenseMode::diagonal, &l1.diagonal, &l2.diagonal);
      condensed = true;
      break;
    }
    case Variant::ad:
    case Variant::ead: {
      const auto tr = build_transforms(sol.disc, cfg.variant == Variant::ead ? DualVariant::eAD : DualVariant::AD);
      const SpMat T1 = block_diagonal(tr.t1, sol.disc.s1_offset, sol.disc.n_s1);
      const SpMat T2 = block_diagonal(tr.t2, sol.disc.s2_offset, sol.disc.n_s2);
      const MixedSystem pg = pg_transform(sys, T1, T2);
      const auto l1 = row_sum_lump(pg.KS1S1, true);
      const auto l2 = row_sum_lump(pg.KS2S2, true);
      sol.diag.lump_dev = std::max(l1.max_deviation, l2.max_deviation);
      cond = condense(pg, unlumped ? CondenseMode::unlumped : CondenseMode::identity);
      condensed = true;
      break;
    }
  }
  if (condensed) {
    A = cond.K;
    rhs = cond.f;
  }
  sol.diag.assembly_s = seconds_since(t_asm);
  const auto info = nnz_and_bandwidth(A);
  sol.diag.nnz_solved = info.nnz;
  sol.diag.bandwidth = info.bandwidth;
  sol.diag.n_dof_solved = static_cast<int>(A.rows());

  const auto t_fac = Clock::now();
  const DirectSolver solver(A);
  sol.diag.factor_s = seconds_since(t_fac);
  const auto t_sol = Clock::now();
  const Eigen::VectorXd x = solver.solve(rhs);
  sol.diag.solve_s = seconds_since(t_sol);

  const Eigen::VectorXd d_free = x.head(nf);
  sol.d = expand_free(sys.free_dofs, sys.n_d(), d_free);
  if (condensed) {
    sol.shear = recover_shear(cond, d_free);
  } else if (monolithic) {
    sol.shear.s1 = x.segment(nf, sys.n_s1);
    sol.shear.s2 = x.segment(nf + sys.n_s1, sys.n_s2);
  }
  return sol;
}

}  // namespace igaplate
