#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "smoothkit/expr.hpp"

namespace smoothkit {

/// Non-polynomial subterm treated as an indeterminate. Variables are atoms of
/// rank 0 ordered by index; everything else is ordered by canonical text.
struct Atom {
  int rank = 0;
  int var = 0;
  std::string text;
  Expr expr;

  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    if (a.var != b.var) return a.var < b.var;
    return a.text < b.text;
  }
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.rank == b.rank && a.var == b.var && a.text == b.text;
  }
};

using Monomial = std::vector<std::pair<Atom, unsigned>>;  // sorted by atom

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Expanded polynomial over atoms with Q(sqrt2) coefficients. Applies the
/// identities abs(u)^2 = u^2, norm(v)^2 = sum v_i^2, recip(a)*a = 1 for atoms,
/// flat(-u) = flat(u), abs(-u) = abs(u) and cases(-g; a, b, c) =
/// cases(g; c, b, a). This is the normal form used for every exact identity
/// check in the library.
class Poly {
 public:
  Poly() = default;
  static Poly constant(const Scalar& c);
  static Poly atom(const Atom& a);
  static Poly monomial(Monomial m, const Scalar& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  const std::map<Monomial, Scalar, MonomialLess>& terms() const { return terms_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scale(const Scalar& c) const;
  Poly pow(unsigned n) const;

  Expr to_expr() const;
  /// Sign of the leading coefficient in canonical order (0 for zero).
  int leading_sign() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(Monomial m, const Scalar& c);
  std::map<Monomial, Scalar, MonomialLess> terms_;
};

bool operator==(const std::pair<Atom, unsigned>& a, const std::pair<Atom, unsigned>& b);

Poly to_poly(const Expr& e);
/// Canonical expression of the normal form.
Expr normal_form(const Expr& e);
bool equal_nf(const Expr& a, const Expr& b);
bool is_zero_nf(const Expr& e);

}  // namespace smoothkit
