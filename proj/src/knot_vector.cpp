#include "igaplate/knot_vector.hpp"

#include <algorithm>
#include <string>

#include "igaplate/error.hpp"

namespace igaplate {

KnotVector validate_knot_vector(std::vector<double> values, int p) {
  if (p < 0) throw Error(ErrorCode::NotOpen, "negative degree");
  const int len = static_cast<int>(values.size());
  for (int i = 0; i + 1 < len; ++i) {
    if (!(values[i] <= values[i + 1]))
      throw Error(ErrorCode::DecreasingKnots,
                  "knot " + std::to_string(i + 1) + " is smaller than its predecessor");
  }
  if (len < 2 * (p + 1)) throw Error(ErrorCode::NotOpen, "too few knots for degree");
  const double a = values.front(), b = values.back();
  if (!(a < b)) throw Error(ErrorCode::NotOpen, "empty parametric domain");
  auto count = [&](double v) {
    return static_cast<int>(std::count(values.begin(), values.end(), v));
  };
  if (count(a) != p + 1 || count(b) != p + 1)
    throw Error(ErrorCode::NotOpen, "end knots must be repeated exactly p+1 times");
  for (int i = p + 1; i < len - p - 1;) {
    int j = i;
    while (j < len - p - 1 && values[j] == values[i]) ++j;
    if (j - i > p + 1)
      throw Error(ErrorCode::ExcessMultiplicity,
                  "interior knot " + std::to_string(values[i]) + " exceeds multiplicity p+1");
    i = j;
  }
  KnotVector kv;
  kv.values_ = std::move(values);
  kv.degree_ = p;
  return kv;
}

int KnotVector::find_span(double x) const {
  const int n = num_basis();
  const int p = degree_;
  if (x < front() || x > back())
    throw Error(ErrorCode::OutOfDomain, "parameter " + std::to_string(x) + " outside knot range");
  if (x == back()) {
    int s = n - 1;
    while (s > p && values_[s] == values_[s + 1]) --s;
    return s;
  }
  auto it = std::upper_bound(values_.begin() + p, values_.begin() + n + 1, x);
  return static_cast<int>(it - values_.begin()) - 1;
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double v : values_)
    if (out.empty() || v != out.back()) out.push_back(v);
  return out;
}

int KnotVector::multiplicity(double x) const {
  return static_cast<int>(std::count(values_.begin(), values_.end(), x));
}

std::vector<ContinuityEntry> continuity_profile(const KnotVector& kv) {
  std::vector<ContinuityEntry> out;
  const auto bp = kv.breakpoints();
  for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
    const int c = kv.multiplicity(bp[k]);
    out.push_back({bp[k], c, kv.degree() - c});
  }
  return out;
}

KnotVector uniform_knot_vector(int p, int spans, double a, double b) {
  std::vector<double> v(static_cast<std::size_t>(p + 1), a);
  for (int k = 1; k < spans; ++k) v.push_back(a + (b - a) * k / spans);
  v.insert(v.end(), static_cast<std::size_t>(p + 1), b);
  return validate_knot_vector(std::move(v), p);
}

}  // namespace igaplate
