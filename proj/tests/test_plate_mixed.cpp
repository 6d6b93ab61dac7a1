#include <doctest.h>

#include <cmath>

#include "igaplate/benchmark.hpp"
#include "igaplate/error.hpp"
#include "igaplate/plate.hpp"

using namespace igaplate;

namespace {

Discretization square(int p, int level, bool shear = true) {
  RefineOptions opt;
  opt.degree = p;
  opt.level = level;
  opt.with_shear = shear;
  return discretize(geometry_catalog("undistorted").patches, opt);
}

LoadFunction benchmark_load(const PlateMaterial& mat) {
  return [mat](double x, double y) { return load_function(x, y, mat); };
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

// Monolithic saddle solve, scattered back into a full displacement vector.
Eigen::VectorXd saddle_solve(const MixedSystem& sys) {
  const SpMat A = saddle_matrix(sys);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
  for (std::size_t k = 0; k < sys.free_dofs.size(); ++k) rhs[static_cast<Eigen::Index>(k)] = sys.f[sys.free_dofs[k]];
  const Eigen::VectorXd x = solve_direct(A, rhs);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(sys.n_d());
  for (std::size_t k = 0; k < sys.free_dofs.size(); ++k) d[sys.free_dofs[k]] = x[static_cast<Eigen::Index>(k)];
  return d;
}

}  // namespace

TEST_SUITE("plate_mixed") {
  TEST_CASE("material matrices") {
    const auto m = material(1e4, 0.3, 0.1);
    CHECK(m.D_M(0, 0) == doctest::Approx(0.915751).epsilon(1e-6));
    CHECK(m.kGt() == doctest::Approx(320.5128).epsilon(1e-6));
    CHECK(m.D_M(0, 1) == doctest::Approx(0.3 * 0.915751).epsilon(1e-6));
    CHECK(material(1e4, 0.0, 0.1).D_M(0, 1) == 0.0);
    const auto m2 = material(1e4, 0.3, 0.2);
    CHECK((m2.D_M - 8.0 * m.D_M).norm() <= 1e-12 * m2.D_M.norm());
    CHECK((m2.D_S - 2.0 * m.D_S).norm() <= 1e-12 * m2.D_S.norm());
    CHECK_THROWS_AS(material(-1.0, 0.3, 0.1), Error);
    CHECK_THROWS_AS(material(1e4, 0.5, 0.1), Error);
    CHECK_THROWS_AS(material(1e4, 0.3, 0.0), Error);
  }

  TEST_CASE("field space counts") {
    RefineOptions opt;
    opt.degree = 2;
    const auto fs = build_field_spaces(geometry_catalog("undistorted").patches[0], opt);
    CHECK(fs.disp.n() == 3);
    CHECK(fs.disp.m() == 3);
    CHECK(fs.shear1.n() == 2);
    CHECK(fs.shear1.m() == 3);
    CHECK(fs.shear2.n() == 3);
    CHECK(fs.shear2.m() == 2);

    // C1 patch gains a double knot before refinement.
    const auto c1 = build_field_spaces(geometry_catalog("c1_single").patches[0], opt);
    CHECK(c1.disp.ku.multiplicity(0.5) == 2);
    opt.continuity_reduction = false;
    const auto keep = build_field_spaces(geometry_catalog("c1_single").patches[0], opt);
    CHECK(keep.disp.ku.multiplicity(0.5) == 1);

    // No interior knots: the flag changes nothing.
    const auto a = build_field_spaces(geometry_catalog("undistorted").patches[0], opt);
    opt.continuity_reduction = true;
    const auto b = build_field_spaces(geometry_catalog("undistorted").patches[0], opt);
    CHECK(a.disp.ku == b.disp.ku);
    CHECK(a.shear1.ku == b.shear1.ku);

    opt.degree = 1;
    CHECK_THROWS_AS(build_field_spaces(geometry_catalog("undistorted").patches[0], opt), Error);
  }

  TEST_CASE("rigid-body mode of the displacement block") {
    const auto disc = square(2, 1);
    const auto mat = material(1e4, 0.3, 0.1);
    const auto& fs = disc.spaces[0];
    const auto el = patch_elements(fs)[0];
    const auto em = element_matrices(el, fs, mat, Scheme::primal, benchmark_load(mat));
    const int nd = static_cast<int>(em.nodes.size());
    // w = a + b x + c y with theta = grad w, on the identity map x = xi.
    Eigen::VectorXd d(3 * nd);
    for (int l = 0; l < nd; ++l) {
      const int node = em.nodes[static_cast<std::size_t>(l)];
      const int i = node / fs.disp.m(), j = node % fs.disp.m();
      const auto& P = fs.geometry.net.point(i, j);
      d[l] = 0.3 + 0.7 * P.x() - 0.2 * P.y();
      d[nd + 2 * l] = 0.7;
      d[nd + 2 * l + 1] = -0.2;
    }
    CHECK((em.Kdd * d).norm() <= 1e-10 * em.Kdd.norm() * d.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em.Kdd);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
  }

  TEST_CASE("weighted shear block equals the B-spline Gram on the unit square") {
    const auto disc = square(2, 0);
    const auto mat = material(1e4, 0.3, 0.1);
    const auto& fs = disc.spaces[0];
    const auto em = element_matrices(patch_elements(fs)[0], fs, mat, Scheme::weighted, benchmark_load(mat));
    const Eigen::MatrixXd G1 = kron(gram_matrix(fs.shear1.ku), gram_matrix(fs.shear1.kv));
    const Eigen::MatrixXd G2 = kron(gram_matrix(fs.shear2.ku), gram_matrix(fs.shear2.kv));
    CHECK((em.KS1S1 - G1).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((em.KS2S2 - G2).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("system dimensions and structure") {
    const auto disc = square(2, 0);
    const auto mat = material(1e4, 0.3, 0.1);
    auto sys = assemble(disc, mat, Scheme::galerkin, benchmark_load(mat));
    CHECK(sys.n_d() + sys.n_s1 + sys.n_s2 == 39);
    CHECK(sys.n_d() == 27);
    const auto bc = apply_clamped_bc(sys, disc);
    // Only the centre control point of the 3x3 net is interior.
    CHECK(bc.free == 3);
    CHECK(bc.fixed == 24);
    CHECK(sys.free_dofs == std::vector<int>{4, 9 + 8, 9 + 9});

    const auto zero = assemble(disc, mat, Scheme::galerkin, [](double, double) { return 0.0; });
    CHECK(zero.f.norm() == 0.0);

    const auto fine = square(2, 2);
    auto big = assemble(fine, mat, Scheme::galerkin, benchmark_load(mat));
    apply_clamped_bc(big, fine);
    int free_w = 0;
    for (int k : big.free_dofs) free_w += k < big.n_nodes;
    CHECK(free_w == 16);
    const Eigen::MatrixXd K = Eigen::MatrixXd(big.Kdd);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd Kf = Eigen::MatrixXd(submatrix(big.Kdd, big.free_dofs, big.free_dofs));
    CHECK((Kf - Kf.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * Kf.cwiseAbs().maxCoeff());

    // Galerkin: coupling blocks are transposes up to the shear-row sign flip.
    CHECK(Eigen::MatrixXd(big.KdS1.transpose()).isApprox(-Eigen::MatrixXd(big.KS1d), 1e-12));
    CHECK(Eigen::MatrixXd(big.KdS2.transpose()).isApprox(-Eigen::MatrixXd(big.KS2d), 1e-12));
  }

  TEST_CASE("shear-shear blocks are symmetric positive definite and uncoupled") {
    const auto mat = material(1e4, 0.3, 0.01);
    for (const char* name : {"undistorted", "nurbs_distorted", "c1_single"}) {
      RefineOptions opt;
      opt.degree = 3;
      opt.level = 1;
      const auto disc = discretize(geometry_catalog(name).patches, opt);
      for (Scheme s : {Scheme::galerkin, Scheme::weighted}) {
        const auto sys = assemble(disc, mat, s, benchmark_load(mat));
        for (const SpMat* B : {&sys.KS1S1, &sys.KS2S2}) {
          const Eigen::MatrixXd M = Eigen::MatrixXd(*B);
          CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * M.cwiseAbs().maxCoeff());
          CHECK(Eigen::LLT<Eigen::MatrixXd>(M).info() == Eigen::Success);
        }
        // The saddle system has no S1-S2 coupling by construction.
        const SpMat A = saddle_matrix(sys);
        const int nf = static_cast<int>(sys.free_dofs.size());
        const Eigen::MatrixXd dense = Eigen::MatrixXd(A);
        CHECK(dense.block(nf, nf + sys.n_s1, sys.n_s1, sys.n_s2).cwiseAbs().maxCoeff() == 0.0);
        CHECK(dense.block(nf + sys.n_s1, nf, sys.n_s2, sys.n_s1).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }

  TEST_CASE("quadrature sufficiency on polynomial patches") {
    const auto disc = square(3, 1);
    const auto mat = material(1e4, 0.3, 0.1);
    const auto a = assemble(disc, mat, Scheme::weighted, [](double, double) { return 1.0; });
    const auto b = assemble(disc, mat, Scheme::weighted, [](double, double) { return 1.0; }, false, 3);
    auto rel = [](const SpMat& x, const SpMat& y) {
      return Eigen::MatrixXd(x - y).cwiseAbs().maxCoeff() / Eigen::MatrixXd(x).cwiseAbs().maxCoeff();
    };
    CHECK(rel(a.Kdd, b.Kdd) <= 1e-12);
    CHECK(rel(a.KS1d, b.KS1d) <= 1e-12);
    CHECK(rel(a.KS2S2, b.KS2S2) <= 1e-12);
    CHECK((a.f - b.f).norm() <= 1e-12 * a.f.norm());
  }

  TEST_CASE("galerkin and weighted saddle solves agree at the centre") {
    const auto mat = material(1e4, 0.3, 0.01);
    const auto disc = square(2, 2);
    double wc[2];
    int k = 0;
    for (Scheme s : {Scheme::galerkin, Scheme::weighted}) {
      auto sys = assemble(disc, mat, s, benchmark_load(mat));
      apply_clamped_bc(sys, disc);
      wc[k++] = eval_deflection(disc, saddle_solve(sys), 0, 0.5, 0.5);
    }
    CHECK(std::abs(wc[0] - wc[1]) <= 0.01 * std::abs(wc[0]));
  }

  TEST_CASE("degenerate Jacobian is reported") {
    auto patch = geometry_catalog("undistorted").patches[0];
    patch.net.points[3] = patch.net.points[0];  // collapse an edge onto a corner
    patch.net.points[1] = patch.net.points[2];
    RefineOptions opt;
    opt.degree = 2;
    const auto disc = discretize({patch}, opt);
    const auto mat = material(1e4, 0.3, 0.1);
    try {
      assemble(disc, mat, Scheme::weighted, benchmark_load(mat));
      FAIL("expected DegenerateJacobian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateJacobian);
    }
  }
}
