#include <doctest.h>

#include <algorithm>
#include <random>

#include "igaplate/benchmark.hpp"
#include "igaplate/condensation.hpp"
#include "igaplate/error.hpp"
#include "igaplate/sparse.hpp"

using namespace igaplate;

TEST_SUITE("linear_solve") {
  TEST_CASE("small systems") {
    SpMat I(5, 5);
    I.setIdentity();
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
    CHECK((solve_direct(I, b) - b).norm() == 0.0);

    const SpMat A = assemble_sorted(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
    const Eigen::VectorXd x = solve_direct(A, Eigen::Vector2d(3.0, 3.0));
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("random banded nonsymmetric system against a dense solve") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 50;
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i)
      for (int j = std::max(0, i - 3); j <= std::min(n - 1, i + 3); ++j) t.emplace_back(i, j, u(rng) + (i == j ? 8.0 : 0.0));
    const SpMat A = assemble_sorted(n, n, t);
    Eigen::VectorXd b(n);
    for (auto& v : b) v = u(rng);
    const Eigen::VectorXd x = solve_direct(A, b);
    const Eigen::VectorXd ref = Eigen::MatrixXd(A).partialPivLu().solve(b);
    CHECK((x - ref).norm() <= 1e-12 * ref.norm());
    CHECK((A * x - b).norm() <= 1e-10 * (norm_inf(A) * x.norm() + b.norm()));

    // Several right-hand sides at once.
    DirectSolver solver(A);
    Eigen::MatrixXd B(n, 2);
    B.col(0) = b;
    B.col(1) = 2.0 * b;
    const Eigen::MatrixXd X = solver.solve(B);
    CHECK((X.col(1) - 2.0 * x).norm() <= 1e-12 * x.norm());
    CHECK(solver.size() == n);
  }

  TEST_CASE("singular and mismatched systems") {
    const SpMat S = assemble_sorted(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    try {
      solve_direct(S, Eigen::Vector2d(1.0, 2.0));
      FAIL("expected SingularMatrix");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularMatrix);
    }
    SpMat rect(2, 3);
    CHECK_THROWS_AS(DirectSolver{rect}, Error);
  }

  TEST_CASE("nnz and bandwidth") {
    SpMat I(5, 5);
    I.setIdentity();
    const auto a = nnz_and_bandwidth(I);
    CHECK(a.nnz == 5);
    CHECK(a.bandwidth == 0);
    std::vector<Triplet> t;
    for (int i = 0; i < 5; ++i)
      for (int j = std::max(0, i - 1); j <= std::min(4, i + 1); ++j) t.emplace_back(i, j, 1.0);
    const auto b = nnz_and_bandwidth(assemble_sorted(5, 5, t));
    CHECK(b.nnz == 13);
    CHECK(b.bandwidth == 1);
  }

  TEST_CASE("assembly does not depend on triplet order") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> idx(0, 9);
    std::vector<Triplet> t;
    for (int k = 0; k < 400; ++k) t.emplace_back(idx(rng), idx(rng), u(rng));
    const SpMat A = assemble_sorted(10, 10, t);
    for (int rep = 0; rep < 5; ++rep) {
      std::shuffle(t.begin(), t.end(), rng);
      const SpMat B = assemble_sorted(10, 10, t);
      CHECK(Eigen::MatrixXd(A - B).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(pruned(assemble_sorted(2, 2, {{0, 0, 1e-20}, {1, 1, 1.0}})).nonZeros() == 1);
    const SpMat sub = submatrix(A, {1, 3}, {0, 2, 4});
    CHECK(sub.rows() == 2);
    CHECK(sub.coeff(1, 2) == A.coeff(3, 4));
  }

  TEST_CASE("condensed systems are smaller than the mixed systems") {
    const auto mat = material(1e4, 0.3, 0.01);
    SolveConfig cfg;
    cfg.degree = 2;
    cfg.level = 3;
    cfg.thickness = 0.01;
    const auto load = [mat](double x, double y) { return load_function(x, y, mat); };
    cfg.variant = Variant::mxd;
    const auto mixed = solve_variant(geometry_catalog("undistorted").patches, cfg, load);
    cfg.variant = Variant::ead;
    const auto cond = solve_variant(geometry_catalog("undistorted").patches, cfg, load);
    CHECK(cond.diag.n_dof_solved == cond.diag.n_dof_primal);
    CHECK(cond.diag.n_dof_solved < mixed.diag.n_dof_solved);
    CHECK(mixed.diag.n_dof_solved == mixed.diag.n_dof_mixed);
    CHECK(cond.diag.bandwidth > 0);
  }
}
