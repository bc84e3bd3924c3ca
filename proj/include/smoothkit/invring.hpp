#pragma once

#include <map>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"
#include "smoothkit/linalg.hpp"
#include "smoothkit/presentation.hpp"

namespace smoothkit {

/// Dense exponent-vector view of a polynomial in n variables.
using Exponents = std::vector<unsigned>;
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const;  // degree, then x0-heavy first
};
using Coeffs = std::map<Exponents, Scalar, GradedLex>;

/// Throws std::invalid_argument for non-polynomial input.
Coeffs expand_polynomial(const Expr& e, int n);
Expr from_coeffs(const Coeffs& c);

/// (1/|G|) sum_g e(g x), expanded.
Expr reynolds(const Expr& e, const FiniteMatrixGroup& g);

bool is_invariant(const Expr& e, const FiniteMatrixGroup& g);

/// Minimal homogeneous generating set of the invariant ring up to degree d,
/// graded then lexicographic, each generator monic in its leading monomial.
std::vector<Expr> invariant_generators(const FiniteMatrixGroup& g, int d);

/// True when `gen` is not in the subalgebra spanned (up to its degree) by
/// the other generators. Exact linear algebra on coefficient vectors.
bool is_needed(const std::vector<Expr>& gens, std::size_t index, int n);

struct HilbertMap {
  FiniteMatrixGroup group;
  std::vector<Expr> generators;
  int degree_bound = 0;
  int target_dim() const { return static_cast<int>(generators.size()); }
  std::string note() const;  // the citation stamped on reports
};

HilbertMap hilbert_map(const FiniteMatrixGroup& g, int d);

struct ConeReport {
  Matrix change;
  bool identity_holds = false;  // (z^2 - x^2 - y^2) o change o h == 0
  int samples = 0;
  int nonnegative = 0;  // samples with z o change o h >= 0
  Scalar min_z;
  bool passed() const { return identity_holds && nonnegative == samples; }
};

/// The +-I model on R^2 with a 3x3 exact invertible change of coordinates.
ConeReport cone_image_check(const HilbertMap& h, const Matrix& change, int samples,
                            std::uint64_t seed);
/// x = u - w, y = 2v, z = u + w for (u, v, w) = (x^2, xy, y^2).
Matrix standard_cone_change();

}  // namespace smoothkit
