#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smoothkit {

using Rational = mpq_class;

/// Element a + b*sqrt(2) of the quadratic field Q(sqrt 2). All arithmetic is
/// exact; the zero test is a == 0 && b == 0.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : a_(v), b_(0) {}  // NOLINT: implicit from integers is intended
  Scalar(int v) : a_(v), b_(0) {}   // NOLINT
  Scalar(Rational a) : a_(std::move(a)), b_(0) { a_.canonicalize(); }  // NOLINT
  Scalar(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static Scalar sqrt2() { return Scalar(Rational(0), Rational(1)); }
  static Scalar ratio(long num, long den) { return Scalar(Rational(num, den)); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_integer() const { return is_rational() && a_.get_den() == 1; }
  bool is_one() const { return is_rational() && a_ == 1; }

  /// Exact sign of a + b*sqrt2.
  int sign() const;
  double to_double() const;

  Scalar operator-() const { return Scalar(-a_, -b_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  /// Throws std::domain_error on division by zero.
  Scalar& operator/=(const Scalar& o);
  Scalar inverse() const;
  Scalar conjugate() const { return Scalar(a_, -b_); }
  Scalar pow(unsigned n) const;

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }
  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  /// Total order by real value.
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Canonical text: "3/4", "sqrt2", "-1/2*sqrt2", "1+2*sqrt2".
  std::string str() const;
  /// Accepts the canonical text above plus "inf"-free literals; throws
  /// std::invalid_argument.
  static Scalar parse(std::string_view text);

  std::size_t hash() const;

 private:
  Rational a_{0};
  Rational b_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Decides whether r lies in Z + s*Z for an irrational s in Q(sqrt2): writes
/// r = m + n*s and checks m, n integral.
bool in_integer_lattice(const Scalar& r, const Scalar& s);

}  // namespace smoothkit
