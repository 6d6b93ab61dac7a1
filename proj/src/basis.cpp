#include "igaplate/basis.hpp"

#include <algorithm>

namespace igaplate {

// Cox-de Boor triangle with derivative extraction (NURBS Book A2.3).
BasisEval1D eval_basis_1d(const KnotVector& kv, double x, int nderiv) {
  const int p = kv.degree();
  const int s = kv.find_span(x);
  const auto& U = kv.values();

  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[s + 1 - j];
    right[j] = U[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  BasisEval1D out;
  out.span = s;
  out.first = s - p;
  out.ders = Eigen::MatrixXd::Zero(nderiv + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);

  const int kmax = std::min(nderiv, p);
  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out.ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= kmax; ++k) {
    out.ders.row(k) *= factor;
    factor *= (p - k);
  }
  return out;
}

Eigen::RowVectorXd basis_row(const KnotVector& kv, double x) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(kv.num_basis());
  const auto b = eval_basis_1d(kv, x, 0);
  row.segment(b.first, kv.degree() + 1) = b.ders.row(0);
  return row;
}

}  // namespace igaplate
