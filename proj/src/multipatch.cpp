#include "igaplate/multipatch.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "igaplate/benchmark.hpp"
#include "igaplate/error.hpp"

namespace igaplate {

namespace {

std::vector<int> range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = first + k;
  return out;
}

int patch_count(const std::vector<int>& offsets, int total, std::size_t p) {
  return (p + 1 < offsets.size() ? offsets[p + 1] : total) - offsets[p];
}

// The shear part of one patch, still carrying global displacement columns.
MixedSystem patch_view(const MixedSystem& sys, const std::vector<int>& o1, const std::vector<int>& o2,
                       std::size_t p) {
  const int c1 = patch_count(o1, sys.n_s1, p), c2 = patch_count(o2, sys.n_s2, p);
  const auto r1 = range(o1[p], c1), r2 = range(o2[p], c2);
  const auto all_d = range(0, sys.n_d());
  MixedSystem out;
  out.scheme = sys.scheme;
  out.n_nodes = sys.n_nodes;
  out.n_s1 = c1;
  out.n_s2 = c2;
  out.Kdd = SpMat(sys.n_d(), sys.n_d());
  out.f = Eigen::VectorXd::Zero(sys.n_d());
  out.KdS1 = submatrix(sys.KdS1, all_d, r1);
  out.KdS2 = submatrix(sys.KdS2, all_d, r2);
  out.KS1d = submatrix(sys.KS1d, r1, all_d);
  out.KS2d = submatrix(sys.KS2d, r2, all_d);
  out.KS1S1 = submatrix(sys.KS1S1, r1, r1);
  out.KS2S2 = submatrix(sys.KS2S2, r2, r2);
  out.free_dofs = sys.free_dofs;
  out.fixed_dofs = sys.fixed_dofs;
  return out;
}

SpMat stack_rows(const std::vector<SpMat>& parts, int cols) {
  std::vector<Triplet> trip;
  int row = 0;
  for (const auto& P : parts) {
    for (int k = 0; k < P.outerSize(); ++k)
      for (SpMat::InnerIterator it(P, k); it; ++it)
        trip.emplace_back(row + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    row += static_cast<int>(P.rows());
  }
  return assemble_sorted(row, cols, std::move(trip));
}

std::pair<double, double> edge_point(const FieldSpaces& fs, Side side, double s) {
  const auto& ku = fs.disp.ku;
  const auto& kv = fs.disp.kv;
  const double u = ku.front() + s * (ku.back() - ku.front());
  const double v = kv.front() + s * (kv.back() - kv.front());
  switch (side) {
    case Side::u0: return {ku.front(), v};
    case Side::u1: return {ku.back(), v};
    case Side::v0: return {u, kv.front()};
    case Side::v1: return {u, kv.back()};
  }
  return {u, v};
}

}  // namespace

int shear_owner(const std::vector<int>& offsets, int index) {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
  return static_cast<int>(it - offsets.begin()) - 1;
}

bool shear_blocks_patch_local(const SpMat& block, const std::vector<int>& offsets, int total) {
  if (block.rows() != total || block.cols() != total)
    throw Error(ErrorCode::DimensionMismatch, "shear block does not match the shear numbering");
  for (int k = 0; k < block.outerSize(); ++k)
    for (SpMat::InnerIterator it(block, k); it; ++it)
      if (shear_owner(offsets, static_cast<int>(it.row())) != shear_owner(offsets, static_cast<int>(it.col())))
        return false;
  return true;
}

MultipatchCondensed assemble_and_condense_multipatch(const Discretization& disc,
                                                     const PlateMaterial& mat, Variant variant,
                                                     const LoadFunction& load, Condensation mode) {
  const bool dual = variant == Variant::ad || variant == Variant::ead;
  MixedSystem sys = assemble(disc, mat, scheme_for(variant), load, dual);
  apply_clamped_bc(sys, disc);
  if (dual) {
    const auto tr = build_transforms(disc, variant == Variant::ead ? DualVariant::eAD : DualVariant::AD);
    sys = pg_transform_elementwise(sys, tr, disc);
  }

  MultipatchCondensed out;
  auto& cond = out.system;
  cond.free_dofs = sys.free_dofs;
  cond.n_d = sys.n_d();
  cond.K = submatrix(sys.Kdd, sys.free_dofs, sys.free_dofs);
  cond.f.resize(static_cast<Eigen::Index>(sys.free_dofs.size()));
  for (std::size_t k = 0; k < sys.free_dofs.size(); ++k)
    cond.f[static_cast<Eigen::Index>(k)] = sys.f[sys.free_dofs[k]];
  const int nf = static_cast<int>(sys.free_dofs.size());
  if (variant == Variant::standard) {
    cond.R1 = SpMat(0, nf);
    cond.R2 = SpMat(0, nf);
    return out;
  }

  struct PatchResult {
    CondensedSystem cond;
    double dev = 0.0;
  };
  const bool exact = mode == Condensation::unlumped || variant == Variant::mxd;
  auto work = [&](std::size_t p) {
    const MixedSystem view = patch_view(sys, disc.s1_offset, disc.s2_offset, p);
    PatchResult r;
    if (exact) {
      r.cond = condense(view, CondenseMode::unlumped);
    } else if (variant == Variant::lmp) {
      const auto l1 = row_sum_lump(view.KS1S1, false);
      const auto l2 = row_sum_lump(view.KS2S2, false);
      r.cond = condense(view, CondenseMode::diagonal, &l1.diagonal, &l2.diagonal);
    } else {
      const auto l1 = row_sum_lump(view.KS1S1, true);
      const auto l2 = row_sum_lump(view.KS2S2, true);
      r.dev = std::max(l1.max_deviation, l2.max_deviation);
      r.cond = condense(view, CondenseMode::identity);
    }
    return r;
  };

  std::vector<std::future<PatchResult>> jobs;
  for (std::size_t p = 0; p < disc.spaces.size(); ++p) jobs.push_back(std::async(std::launch::async, work, p));
  std::vector<SpMat> r1, r2;
  for (auto& job : jobs) {
    const PatchResult r = job.get();
    cond.K = SpMat(cond.K + r.cond.K);
    r1.push_back(r.cond.R1);
    r2.push_back(r.cond.R2);
    out.lump_dev = std::max(out.lump_dev, r.dev);
  }
  cond.K = pruned(cond.K, 0.0);
  cond.R1 = stack_rows(r1, nf);
  cond.R2 = stack_rows(r2, nf);
  return out;
}

double interface_jump(const Discretization& disc, const Eigen::VectorXd& d, int samples) {
  double jump = 0.0;
  for (const auto& itf : disc.dofs.interfaces) {
    const auto& fa = disc.spaces[static_cast<std::size_t>(itf.patch_a)];
    const auto& fb = disc.spaces[static_cast<std::size_t>(itf.patch_b)];
    for (int k = 0; k < samples; ++k) {
      const double s = (k + 0.5) / samples;
      const auto [ua, va] = edge_point(fa, itf.side_a, s);
      const auto [ub, vb] = edge_point(fb, itf.side_b, itf.reversed ? 1.0 - s : s);
      const double wa = eval_deflection(disc, d, itf.patch_a, ua, va);
      const double wb = eval_deflection(disc, d, itf.patch_b, ub, vb);
      jump = std::max(jump, std::abs(wa - wb));
    }
  }
  return jump;
}

}  // namespace igaplate
