#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "smoothkit/scalar.hpp"

using smoothkit::Rational;
using smoothkit::Scalar;

namespace {

Scalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(1, 12);
  return Scalar(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("field axioms hold exactly on random triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + Scalar(0) == a);
    CHECK(a * Scalar(1) == a);
    CHECK((a - a).is_zero());
    if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
  }
}

TEST_CASE("sign is exact and agrees with floating point away from zero") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Scalar a = random_scalar(rng);
    double d = a.to_double();
    if (std::fabs(d) > 1e-9) CHECK(a.sign() == (d > 0 ? 1 : -1));
  }
  CHECK(Scalar(Rational(-1), Rational(1)).sign() == 1);   // sqrt2 - 1
  CHECK(Scalar(Rational(3), Rational(-2)).sign() == 1);   // 3 - 2 sqrt2 > 0
  CHECK(Scalar(Rational(-3), Rational(2)).sign() == -1);
  CHECK((Scalar::sqrt2() * Scalar::sqrt2()) == Scalar(2));
}

TEST_CASE("zero test and division by zero") {
  CHECK(Scalar(Rational(0), Rational(0)).is_zero());
  CHECK_FALSE(Scalar::sqrt2().is_zero());
  CHECK_THROWS_AS(Scalar(1) / Scalar(0), std::domain_error);
}

TEST_CASE("text round trip") {
  for (const char* s : {"0", "3/4", "-7", "sqrt2", "-sqrt2", "1/3*sqrt2", "1+sqrt2",
                        "-1/2-3*sqrt2", "5-1/7*sqrt2"}) {
    Scalar v = Scalar::parse(s);
    CHECK(Scalar::parse(v.str()) == v);
  }
  CHECK(Scalar::parse("1+sqrt2") == Scalar(Rational(1), Rational(1)));
  CHECK(Scalar::parse("-1/2-3*sqrt2") == Scalar(Rational(-1, 2), Rational(-3)));
  CHECK_THROWS(Scalar::parse("abc"));
  CHECK_THROWS(Scalar::parse("1/0"));
}

TEST_CASE("integer lattice membership Z + sqrt2 Z") {
  Scalar s = Scalar::sqrt2();
  CHECK_FALSE(smoothkit::in_integer_lattice(Scalar::ratio(1, 2), s));
  CHECK(smoothkit::in_integer_lattice(Scalar(3), s));
  CHECK(smoothkit::in_integer_lattice(Scalar(Rational(2), Rational(-5)), s));
  CHECK_FALSE(smoothkit::in_integer_lattice(Scalar(Rational(2), Rational(1, 2)), s));
  CHECK_THROWS(smoothkit::in_integer_lattice(Scalar(1), Scalar(2)));
}
