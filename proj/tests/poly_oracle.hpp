// Bivariate polynomials with exact arithmetic on coefficients, used to
// build the benchmark fields independently of the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "igaplate/benchmark.hpp"
#include "igaplate/plate.hpp"

namespace oracle {

using igaplate::kLoadAmplitude;

struct Poly {
  std::map<std::pair<int, int>, double> c;

  static Poly constant(double v) { return Poly{{{{0, 0}, v}}}; }
  static Poly x() { return Poly{{{{1, 0}, 1.0}}}; }
  static Poly y() { return Poly{{{{0, 1}, 1.0}}}; }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [k, v] : o.c) r.c[k] += v;
    return r;
  }
  Poly operator*(double s) const {
    Poly r = *this;
    for (auto& [k, v] : r.c) v *= s;
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * -1.0; }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [a, u] : c)
      for (const auto& [b, v] : o.c) r.c[{a.first + b.first, a.second + b.second}] += u * v;
    return r;
  }
  Poly dx() const {
    Poly r;
    for (const auto& [k, v] : c)
      if (k.first > 0) r.c[{k.first - 1, k.second}] += v * k.first;
    return r;
  }
  Poly dy() const {
    Poly r;
    for (const auto& [k, v] : c)
      if (k.second > 0) r.c[{k.first, k.second - 1}] += v * k.second;
    return r;
  }
  double operator()(double px, double py) const {
    double s = 0.0;
    for (const auto& [k, v] : c) s += v * std::pow(px, k.first) * std::pow(py, k.second);
    return s;
  }
};

inline Poly pow(const Poly& p, int e) {
  Poly r = Poly::constant(1.0);
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

struct Fields {
  Poly w, th1, th2, load;
};

inline Fields benchmark_fields(double t, double nu) {
  const Poly X = Poly::x(), Y = Poly::y(), one = Poly::constant(1.0);
  const Poly bx = X * (X - one), by = Y * (Y - one);
  const Poly qx = X * X * 5.0 - X * 5.0 + one, qy = Y * Y * 5.0 - Y * 5.0 + one;
  const Poly h1 = bx * qy, h2 = by * qx;
  const Poly w0 = pow(bx, 3) * pow(by, 3) * (1.0 / 3.0);
  const Poly w1 = pow(by, 2) * bx * h2, w2 = pow(bx, 2) * by * h1;
  Fields b;
  b.w = (w0 - (w1 + w2) * (2.0 * t * t / (5.0 * (1.0 - nu)))) * kLoadAmplitude;
  b.th1 = w0.dx() * kLoadAmplitude;
  b.th2 = w0.dy() * kLoadAmplitude;
  const Poly f1 = h2 * (pow(by, 2) * 2.0 + h1) * 12.0, f2 = h1 * (pow(bx, 2) * 2.0 + h2) * 12.0;
  const double D = 1e4 * t * t * t / (12.0 * (1.0 - nu * nu));
  b.load = (f1 + f2) * (kLoadAmplitude * D);
  return b;
}

// Largest relative residual of the three plate equations at (x, y):
// moment balance in both directions and transverse force balance.
struct StrongForm {
  Poly r[3];
  Poly scale[3][3];

  StrongForm(const Fields& b, const igaplate::PlateMaterial& mat) {
    const Poly k11 = b.th1.dx(), k22 = b.th2.dy(), k12 = b.th1.dy() + b.th2.dx();
    const Poly M11 = k11 * mat.D_M(0, 0) + k22 * mat.D_M(0, 1);
    const Poly M22 = k11 * mat.D_M(1, 0) + k22 * mat.D_M(1, 1);
    const Poly M12 = k12 * mat.D_M(2, 2);
    const Poly Q1 = (b.w.dx() - b.th1) * mat.kGt(), Q2 = (b.w.dy() - b.th2) * mat.kGt();
    const Poly terms[3][3] = {{M11.dx(), M12.dy(), Q1}, {M12.dx(), M22.dy(), Q2}, {Q1.dx(), Q2.dy(), b.load}};
    for (int e = 0; e < 3; ++e) {
      r[e] = terms[e][0] + terms[e][1] + terms[e][2];
      for (int k = 0; k < 3; ++k) scale[e][k] = terms[e][k];
    }
  }

  double relative(double x, double y) const {
    double worst = 0.0;
    for (int e = 0; e < 3; ++e) {
      double s = 0.0;
      for (const auto& t : scale[e]) s += std::abs(t(x, y));
      worst = std::max(worst, std::abs(r[e](x, y)) / s);
    }
    return worst;
  }
};

}  // namespace oracle
