#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "smoothkit/expr.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/sampler.hpp"

using namespace smoothkit;

TEST_CASE("parse grammar identities") {
  Expr e = parse_expr("x0^2 + x1^2", 2);
  REQUIRE(e.kind() == Kind::Sum);
  CHECK(e.arg(0) == Expr::pow(Expr::var(0), 2));
  CHECK(e.arg(1) == Expr::pow(Expr::var(1), 2));
  CHECK(parse_expr("flat(x0)", 1) == Expr::flat(Expr::var(0)));
  CHECK(parse_expr("t", 1) == Expr::var(0));
  CHECK(parse_expr("recip(x0 - sqrt2)", 1).kind() == Kind::Recip);
  CHECK(parse_expr("cases(t; -1, 0, 1)", 1).kind() == Kind::Cases);
  CHECK(parse_expr("3/4", 1).value() == Scalar::ratio(3, 4));
}

TEST_CASE("parse errors carry a position") {
  try {
    (void)parse_expr("x2", 2);
    FAIL("expected error");
  } catch (const ParseError& err) {
    CHECK(err.position == 0);
    CHECK(std::string(err.what()).find("out of range") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expr("x0 +", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(x0)", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x0^-1", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x0 / x0", 1), ParseError);
}

TEST_CASE("printer round trip on sampled expressions") {
  ExprSampler sampler(3, 2024);
  for (int i = 0; i < 300; ++i) {
    Expr e = sampler.any(3);
    std::string s = e.str();
    Expr back = parse_expr(s, 3);
    CHECK_MESSAGE(back == e, s);
    CHECK(equal_nf(back, e));
  }
}

TEST_CASE("derivative examples") {
  Expr x = Expr::var(0);
  CHECK(equal_nf(differentiate(Expr::pow(x, 2), 0).expr, Expr::constant(2) * x));

  Derivative df = differentiate(Expr::flat(x), 0);
  CHECK_FALSE(df.valid_off_guard_locus_only);
  Expr branch = Expr::product({Expr::constant(2), Expr::pow(Expr::recip(x), 3), Expr::flat(x)});
  CHECK(df.expr == Expr::cases(x, branch, Expr::constant(0), branch));

  Derivative da = differentiate(Expr::abs(x), 0);
  CHECK(da.valid_off_guard_locus_only);
  CHECK(da.expr == Expr::cases(x, Expr::constant(-1), Expr::constant(0), Expr::constant(1)));
}

TEST_CASE("flat derivative agrees with finite differences near the flat point") {
  // oracle: central differences of exp(-1/t^2) evaluated directly
  Expr t = Expr::var(0);
  Expr d = differentiate(Expr::flat(t), 0).expr;
  for (double x : {1e-1, 0.5, 0.3, 0.2}) {
    double h = x * 1e-5;
    auto f = [](double s) { return std::exp(-1.0 / (s * s)); };
    double fd = (f(x + h) - f(x - h)) / (2 * h);
    double pt[1] = {x};
    double got = evaluate(d, pt);
    CHECK(std::fabs(got - fd) <= 1e-6 * std::fabs(fd) + 1e-300);
  }
  double zero[1] = {0.0};
  CHECK(evaluate(d, zero) == 0.0);
}

TEST_CASE("flat jets shrink towards the flat point") {
  Expr t = Expr::var(0);
  Expr d = Expr::flat(t);
  for (int n = 0; n <= 6; ++n) {
    double prev = INFINITY;
    for (int k = 0; k <= 4; ++k) {
      double x = std::pow(10.0, -1.0 - 0.5 * k);
      double pt[1] = {x};
      double v = std::fabs(evaluate(d, pt));
      CHECK(v <= prev);
      prev = v;
    }
    d = differentiate(d, 0).expr;
  }
}

TEST_CASE("evaluation examples") {
  Expr e = parse_expr("x0^2 + x1^2", 2);
  Scalar p[2] = {Scalar(3), Scalar(4)};
  CHECK(evaluate_exact(e, p).value() == Scalar(25));
  double pd[2] = {3, 4};
  CHECK(evaluate(e, pd) == 25.0);

  Expr flat = parse_expr("flat(t)", 1);
  Scalar z[1] = {Scalar(0)};
  CHECK(evaluate_exact(flat, z).value() == Scalar(0));
  double zd[1] = {0.0};
  CHECK(evaluate(flat, zd) == 0.0);

  Expr r = parse_expr("recip(x0 - sqrt2)", 1);
  Scalar at[1] = {Scalar::sqrt2()};
  CHECK_THROWS_AS((void)evaluate_exact(r, at), EvalError);
  Scalar one[1] = {Scalar(1)};
  // 1/(1 - sqrt2) = -1 - sqrt2
  CHECK(evaluate_exact(r, one).value() == Scalar(Rational(-1), Rational(-1)));

  Expr s = parse_expr("sin(x0)", 1);
  CHECK_FALSE(evaluate_exact(s, one).has_value());
  CHECK(evaluate_exact(s, z).value() == Scalar(0));
}

TEST_CASE("derivative matches central differences on random smooth expressions") {
  ExprSampler sampler(3, 99);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  int checked = 0;
  while (checked < 100) {
    Expr e = sampler.r1(3);
    int var = static_cast<int>(rng() % 3);
    double x[3] = {coord(rng), coord(rng), coord(rng)};
    Expr d = differentiate(e, var).expr;
    double h = 1e-5;
    double xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
    xp[var] += h;
    xm[var] -= h;
    double fd = (evaluate(e, xp) - evaluate(e, xm)) / (2 * h);
    double got = evaluate(d, x);
    CHECK_MESSAGE(std::fabs(got - fd) <= 1e-6 * (1 + std::fabs(got)), e.str());
    ++checked;
  }
}

TEST_CASE("normal form identities") {
  Expr x = Expr::var(0), y = Expr::var(1);
  CHECK(equal_nf(Expr::pow(x + y, 2), Expr::pow(x, 2) + Expr::constant(2) * x * y + Expr::pow(y, 2)));
  CHECK(equal_nf(Expr::pow(Expr::abs(x), 2), Expr::pow(x, 2)));
  CHECK(equal_nf(Expr::pow(Expr::norm({x, y}), 2), x * x + y * y));
  CHECK(equal_nf(Expr::flat(-x), Expr::flat(x)));
  CHECK(equal_nf(Expr::recip(x) * x, Expr::constant(1)));
  CHECK_FALSE(equal_nf(x, y));
}
