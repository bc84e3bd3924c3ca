#pragma once

#include <limits>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"

namespace smoothkit {

/// Closed interval with outward rounding; bounds may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval point(double v) { return {v, v}; }
  static Interval entire() { return {}; }

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool positive() const { return lo > 0.0; }
  bool negative() const { return hi < 0.0; }
  bool nonnegative() const { return lo >= 0.0; }
  bool nonpositive() const { return hi <= 0.0; }
};

/// Axis-aligned box, possibly unbounded. Used as the region argument of the
/// certifier and as plot domains.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box all(int dim);
  int dim() const { return static_cast<int>(lo.size()); }
  bool bounded() const;
  bool contains(std::span<const double> x) const;
  std::string str() const;
};

Interval eval_interval(const Expr& e, const Box& box);

/// Sign of e certified on the box: +1, -1, or 0 when undecided. With
/// `allow_zero` the result +1 also covers e >= 0 (and -1 covers e <= 0).
/// Bounded boxes are bisected up to `depth` levels.
int certified_sign(const Expr& e, const Box& box, bool allow_zero = false, int depth = 6);

}  // namespace smoothkit
