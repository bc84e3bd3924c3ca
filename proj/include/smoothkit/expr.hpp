#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smoothkit/scalar.hpp"

namespace smoothkit {

enum class Kind {
  Const,
  Var,
  Sum,
  Product,
  IntPow,
  Sin,
  Cos,
  Flat,   // u -> exp(-1/u^2), 0 at u = 0
  Abs,
  Cases,  // cases(g; neg, zero, pos) by sign of g
  Recip,  // 1/u where u != 0
  Norm,   // sqrt(u1^2 + ... + uk^2)
};

std::string_view kind_name(Kind k);

struct Node;

/// Immutable symbolic expression. Cheap to copy (shared node). Constructors
/// apply light local simplification (constant folding, flattening, neutral
/// elements, and pruning of nested cases on an identical guard) so that
/// repeated differentiation stays tractable.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(Scalar c);
  static Expr var(int index);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr pow(Expr base, unsigned n);
  static Expr sin(Expr u);
  static Expr cos(Expr u);
  static Expr flat(Expr u);
  static Expr abs(Expr u);
  static Expr cases(Expr guard, Expr neg, Expr zero, Expr pos);
  static Expr recip(Expr u);
  static Expr norm(std::vector<Expr> parts);

  Kind kind() const;
  const Scalar& value() const;  // Const only
  int index() const;            // Var only
  unsigned exponent() const;    // IntPow only
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i) const { return args()[i]; }

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const { return is_const() && value().is_zero(); }
  bool is_one() const { return is_const() && value().is_one(); }

  /// Number of variables needed: 1 + the largest Var index (0 if none).
  int min_dim() const;
  bool contains(Kind k) const;
  /// True when no Abs, Cases, Recip or Norm node occurs (rule R1 class).
  bool is_r1_class() const;
  /// True when built only from Const, Var, Sum, Product, IntPow.
  bool is_polynomial() const;
  std::size_t size() const;
  std::size_t hash() const;

  /// Canonical fully parenthesized text; parse(str()) reproduces the tree.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator-(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend struct Node;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the expression grammar. Variables are x0..x{dim-1}; `t` is an alias
/// for x0. Throws ParseError (syntax, or variable index >= dim).
Expr parse_expr(std::string_view text, int dim);

/// Substitutes Var i by subs[i]. Throws std::invalid_argument if a variable
/// has no substitute.
Expr compose(const Expr& e, std::span<const Expr> subs);
std::vector<Expr> compose_all(std::span<const Expr> es, std::span<const Expr> subs);

struct Derivative {
  Expr expr;
  /// Set when an Abs, Norm or non-flat Cases node was differentiated: the
  /// result equals the true derivative only off the guard zero-sets.
  bool valid_off_guard_locus_only = false;
};

Derivative differentiate(const Expr& e, int var);
/// Iterated derivative; the flag is the disjunction over all steps.
Derivative differentiate_n(const Expr& e, int var, unsigned times);

/// Floating evaluation. Cases and Abs select by the exact sign of the
/// computed guard value; Flat(0) = 0 exactly. Throws EvalError on Recip of 0
/// and on any NaN.
double evaluate(const Expr& e, std::span<const double> point);
/// Exact evaluation; std::nullopt when a transcendental node is reached at a
/// point where its value is not in Q(sqrt2). Throws EvalError on Recip of 0.
std::optional<Scalar> evaluate_exact(const Expr& e, std::span<const Scalar> point);

/// Univariate restriction t -> e(base + t*direction).
Expr restrict_to_line(const Expr& e, std::span<const Scalar> base,
                      std::span<const Scalar> direction);

std::vector<double> to_doubles(std::span<const Scalar> v);

}  // namespace smoothkit
