#pragma once

#include <cstdint>
#include <random>

#include "smoothkit/expr.hpp"

namespace smoothkit {

/// Seeded grammar sampler for candidate pools and property tests. Uses the
/// raw engine output only, so streams are identical across standard
/// libraries.
class ExprSampler {
 public:
  ExprSampler(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  /// Expressions without abs/cases/recip/norm (rule R1 class).
  Expr r1(int depth);
  /// Polynomials with small rational coefficients.
  Expr polynomial(int degree, int terms);
  /// Mix of polynomial, flat, abs and cases nodes.
  Expr mixed(int depth);
  /// Every node kind, recip/norm included.
  Expr any(int depth);

  Scalar small_rational();
  std::uint64_t next() { return rng_(); }
  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  int dim() const { return dim_; }

 private:
  Expr leaf();
  Expr node(int depth, int mode);

  int dim_;
  std::mt19937_64 rng_;
};

}  // namespace smoothkit
