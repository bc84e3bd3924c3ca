#pragma once

#include <optional>
#include <span>
#include <vector>

#include "smoothkit/expr.hpp"

namespace smoothkit {

/// Truncated Taylor coefficients a_j = f^(j)(0) / j! of s -> f(p + s d).
using Series = std::vector<Scalar>;

/// Exact one-sided expansion at s = 0 on the side sign(side) of the line.
/// Abs and Cases are resolved by the leading coefficient of their guard on
/// that side. Returns nullopt when some node has no exact expansion there
/// (transcendental value, recip of 0, guard vanishing to the truncation
/// order, irrational square root outside Q(sqrt2)).
std::optional<Series> one_sided_series(const Expr& e, std::span<const Scalar> point,
                                       std::span<const Scalar> direction, int side,
                                       int order);

/// Derivatives j! a_j of a series.
std::vector<Scalar> series_derivatives(const Series& s);

/// Square root in Q(sqrt2) when it exists.
std::optional<Scalar> exact_sqrt(const Scalar& x);

}  // namespace smoothkit
