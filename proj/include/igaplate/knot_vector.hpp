#pragma once

#include <vector>

namespace igaplate {

/// Open, non-decreasing knot vector together with its polynomial degree.
/// Instances are only created through validate_knot_vector, so every
/// KnotVector in circulation satisfies the invariants.
class KnotVector {
 public:
  KnotVector() = default;

  const std::vector<double>& values() const { return values_; }
  int degree() const { return degree_; }
  int num_basis() const { return static_cast<int>(values_.size()) - degree_ - 1; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(values_.size()); }

  // Index s with values[s] <= x < values[s+1]; the last non-empty span is
  // closed at the right end.
  int find_span(double x) const;

  // Distinct breakpoints including both ends.
  std::vector<double> breakpoints() const;
  int num_spans() const { return static_cast<int>(breakpoints().size()) - 1; }

  // Multiplicity of a value (exact comparison).
  int multiplicity(double x) const;

  bool operator==(const KnotVector& o) const {
    return degree_ == o.degree_ && values_ == o.values_;
  }

 private:
  friend KnotVector validate_knot_vector(std::vector<double> values, int p);
  std::vector<double> values_;
  int degree_ = 0;
};

KnotVector validate_knot_vector(std::vector<double> values, int p);

struct ContinuityEntry {
  double knot;
  int multiplicity;
  int continuity;  // p - multiplicity, -1 means discontinuous
};

std::vector<ContinuityEntry> continuity_profile(const KnotVector& kv);

// Open knot vector on [a, b] with `spans` uniform spans.
KnotVector uniform_knot_vector(int p, int spans, double a = 0.0, double b = 1.0);

}  // namespace igaplate
