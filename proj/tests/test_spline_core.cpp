#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "igaplate/basis.hpp"
#include "igaplate/benchmark.hpp"
#include "igaplate/error.hpp"
#include "igaplate/knot_vector.hpp"
#include "igaplate/surface.hpp"

using namespace igaplate;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidConfig;
}

KnotVector random_knots(std::mt19937& rng, int p) {
  std::uniform_int_distribution<int> count(0, 5), mult(1, p);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::vector<double> interior;
  for (int k = count(rng); k > 0; --k) {
    const double v = std::round(unit(rng) * 40.0) / 40.0;
    if (std::find(interior.begin(), interior.end(), v) != interior.end()) continue;
    for (int c = mult(rng); c > 0; --c) interior.push_back(v);
  }
  std::sort(interior.begin(), interior.end());
  std::vector<double> v(static_cast<std::size_t>(p + 1), 0.0);
  v.insert(v.end(), interior.begin(), interior.end());
  v.insert(v.end(), static_cast<std::size_t>(p + 1), 1.0);
  return validate_knot_vector(v, p);
}

void expect_same_geometry(const SurfacePatch& a, const SurfacePatch& b, int samples) {
  for (int i = 0; i <= samples; ++i)
    for (int j = 0; j <= samples; ++j) {
      const double u = double(i) / samples, v = double(j) / samples;
      const auto pa = eval_surface(a, u, v, 0).point;
      const auto pb = eval_surface(b, u, v, 0).point;
      CHECK((pa - pb).norm() <= 1e-12 * std::max(1.0, pa.norm()));
    }
}

}  // namespace

TEST_SUITE("spline_core") {
  TEST_CASE("validate_knot_vector accepts open vectors") {
    const auto a = validate_knot_vector({0, 0, 1, 1}, 1);
    CHECK(a.num_basis() == 2);
    const auto b = validate_knot_vector({0, 0, 0, 0.5, 1, 1, 1}, 2);
    CHECK(b.num_basis() == 4);
    CHECK(b.multiplicity(0.5) == 1);
  }

  TEST_CASE("validate_knot_vector rejects bad input") {
    CHECK(code_of([] { validate_knot_vector({0, 1, 0}, 1); }) == ErrorCode::DecreasingKnots);
    CHECK(code_of([] { validate_knot_vector({0, 0.2, 1, 1}, 1); }) == ErrorCode::NotOpen);
    CHECK(code_of([] { validate_knot_vector({0, 0, 0.5, 0.5, 0.5, 1, 1}, 1); }) == ErrorCode::ExcessMultiplicity);
  }

  TEST_CASE("Bernstein values and end derivatives") {
    const auto kv = validate_knot_vector({0, 0, 0, 1, 1, 1}, 2);
    const auto e = eval_basis_1d(kv, 0.5, 0);
    CHECK(e.ders(0, 0) == doctest::Approx(0.25));
    CHECK(e.ders(0, 1) == doctest::Approx(0.5));
    CHECK(e.ders(0, 2) == doctest::Approx(0.25));
    const auto d = eval_basis_1d(kv, 0.0, 1);
    CHECK(d.ders(0, 0) == doctest::Approx(1.0));
    CHECK(d.ders(0, 1) == doctest::Approx(0.0));
    CHECK(d.ders(1, 0) == doctest::Approx(-2.0));
    CHECK(d.ders(1, 1) == doctest::Approx(2.0));
    CHECK(d.ders(1, 2) == doctest::Approx(0.0));
  }

  TEST_CASE("two-span quadratic at 0.25 matches hand expansion") {
    const auto kv = validate_knot_vector({0, 0, 0, 0.5, 1, 1, 1}, 2);
    const auto e = eval_basis_1d(kv, 0.25, 0);
    // On [0, 0.5]: N0 = (1-2x)^2, N1 = 2x(2-3x), N2 = 2x^2 at x = 0.25.
    CHECK(e.first == 0);
    CHECK(e.ders(0, 0) == doctest::Approx(0.25));
    CHECK(e.ders(0, 1) == doctest::Approx(0.625));
    CHECK(e.ders(0, 2) == doctest::Approx(0.125));
    double sum = 0;
    for (int k = 0; k < 3; ++k) {
      CHECK(e.ders(0, k) >= 0.0);
      CHECK(e.ders(0, k) <= 1.0);
      sum += e.ders(0, k);
    }
    CHECK(sum == doctest::Approx(1.0));
  }

  TEST_CASE("out-of-domain evaluation fails and the right end is closed") {
    const auto kv = uniform_knot_vector(2, 3);
    CHECK(code_of([&] { eval_basis_1d(kv, 1.0 + 1e-9, 0); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([&] { eval_basis_1d(kv, -1e-9, 0); }) == ErrorCode::OutOfDomain);
    const auto e = eval_basis_1d(kv, 1.0, 0);
    CHECK(e.ders(0, 2) == doctest::Approx(1.0));
  }

  TEST_CASE("partition of unity, derivative consistency and local support on random vectors") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      const int p = 1 + trial % 4;
      const auto kv = random_knots(rng, p);
      for (int s = 0; s < 20; ++s) {
        const double x = unit(rng);
        const auto e = eval_basis_1d(kv, x, 1);
        CHECK(std::abs(e.ders.row(0).sum() - 1.0) <= 1e-13);
        CHECK(std::abs(e.ders.row(1).sum()) <= 1e-9);
        for (int k = 0; k <= p; ++k) {
          const int i = e.first + k;
          if (e.ders(0, k) != 0.0) CHECK((kv[i] <= x && x <= kv[i + p + 1]));
        }
        // Central differences away from breakpoints.
        const double h = 1e-6;
        if (x - h < 0 || x + h > 1 || kv.find_span(x - h) != kv.find_span(x + h)) continue;
        const auto rp = basis_row(kv, x + h), rm = basis_row(kv, x - h);
        for (int k = 0; k <= p; ++k) {
          const double fd = (rp[e.first + k] - rm[e.first + k]) / (2 * h);
          CHECK(std::abs(fd - e.ders(1, k)) <= 1e-6 * std::max(1.0, std::abs(e.ders(1, k))));
        }
      }
    }
  }

  TEST_CASE("bilinear unit square maps identically") {
    const auto sq = geometry_catalog("undistorted").patches.front();
    for (double u : {0.0, 0.3, 1.0})
      for (double v : {0.0, 0.7, 1.0}) {
        const auto e = eval_surface(sq, u, v);
        CHECK(e.det == doctest::Approx(1.0));
        CHECK(e.point.x() == doctest::Approx(u));
        CHECK(e.point.y() == doctest::Approx(v));
        CHECK(e.point.z() == doctest::Approx(0.0));
      }
  }

  TEST_CASE("NURBS weight function at the centre of the distorted patch") {
    const auto patch = geometry_catalog("nurbs_distorted").patches.front();
    const auto e = eval_surface(patch, 0.5, 0.5);
    // Bernstein values (1/4, 1/2, 1/4) per direction; only the centre weight is 1.5.
    CHECK(e.basis.W == doctest::Approx(1.125).epsilon(1e-14));
    CHECK(std::abs(e.basis.values.sum() - 1.0) <= 1e-13);
  }

  TEST_CASE("rational partition of unity on every catalog patch") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& name : geometry_names())
      for (const auto& patch : geometry_catalog(name).patches)
        for (int s = 0; s < 25; ++s) {
          const auto e = eval_surface(patch, unit(rng), unit(rng));
          CHECK(std::abs(e.basis.values.sum() - 1.0) <= 1e-13);
          CHECK(std::abs(e.basis.d_xi.sum()) <= 1e-11);
          CHECK(std::abs(e.basis.d_eta.sum()) <= 1e-11);
        }
  }

  TEST_CASE("knot insertion keeps the geometry") {
    const auto sq = geometry_catalog("undistorted").patches.front();
    const auto r = insert_knots(sq, {0.5}, {});
    CHECK(r.knots_u.num_spans() == 2);
    CHECK(r.knots_v.num_spans() == 1);
    expect_same_geometry(sq, r, 8);

    const auto nd = geometry_catalog("nurbs_distorted").patches.front();
    const auto r2 = insert_knots(nd, {0.25, 0.5, 0.75}, {0.25, 0.5, 0.75});
    CHECK(r2.knots_u.num_spans() == 4);
    CHECK(r2.knots_v.num_spans() == 4);
    expect_same_geometry(nd, r2, 16);
  }

  TEST_CASE("inserting past full multiplicity overflows") {
    const auto c0 = geometry_catalog("c0_single").patches.front();
    CHECK(c0.knots_u.multiplicity(0.5) == 2);
    CHECK(code_of([&] { insert_knots(c0, {0.5}, {}); }) == ErrorCode::MultiplicityOverflow);
  }

  TEST_CASE("degree elevation keeps the geometry and the continuity") {
    const auto sq = geometry_catalog("undistorted").patches.front();
    const auto e = elevate_degree(sq, 1, 1);
    CHECK(e.degree_u() == 2);
    CHECK(e.degree_v() == 2);
    CHECK(e.net.n == 3);
    CHECK(e.net.m == 3);
    expect_same_geometry(sq, e, 8);

    const auto c1 = geometry_catalog("c1_single").patches.front();
    const auto e1 = elevate_degree(c1, 1, 1);
    CHECK(e1.degree_u() == 3);
    CHECK(e1.knots_u.multiplicity(0.5) == 2);
    CHECK(e1.knots_v.multiplicity(0.5) == 2);
    expect_same_geometry(c1, e1, 16);

    const auto nd = geometry_catalog("nurbs_distorted").patches.front();
    expect_same_geometry(nd, elevate_degree(nd, 2, 1), 16);
    CHECK(elevate_degree(c1, 0, 0) == c1);
  }

  TEST_CASE("continuity profile") {
    const auto a = continuity_profile(validate_knot_vector({0, 0, 0, 0.5, 1, 1, 1}, 2));
    REQUIRE(a.size() == 1);
    CHECK(a[0].knot == 0.5);
    CHECK(a[0].multiplicity == 1);
    CHECK(a[0].continuity == 1);
    const auto b = continuity_profile(validate_knot_vector({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2));
    REQUIRE(b.size() == 1);
    CHECK(b[0].multiplicity == 2);
    CHECK(b[0].continuity == 0);
    CHECK(continuity_profile(validate_knot_vector({0, 0, 1, 1}, 1)).empty());
  }
}
