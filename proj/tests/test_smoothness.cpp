#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "smoothkit/expr.hpp"
#include "smoothkit/interval.hpp"
#include "smoothkit/jets.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/probe.hpp"
#include "smoothkit/sampler.hpp"
#include "smoothkit/smoothness.hpp"

using namespace smoothkit;

namespace {
Expr t() { return Expr::var(0); }
Expr P(std::string_view s, int dim = 1) { return parse_expr(s, dim); }

// The probe has a fixed step ladder, so a smooth function with a feature
// much finer than 1e-2 (e.g. sqrt(x^4 + c^2) for a tiny c) looks divergent.
// Sampled constants such as 17/4 - 3 sqrt2 produce exactly that.
bool desk_scale(const Expr& e) {
  if (e.is_const()) return e.value().is_zero() || std::fabs(e.value().to_double()) >= 1e-2;
  for (const Expr& c : e.args())
    if (!desk_scale(c)) return false;
  return true;
}
}  // namespace

TEST_CASE("interval enclosures") {
  Box b{{-1, 0}, {2, 3}};
  Interval i = eval_interval(P("x0^2 + x1", 2), b);
  CHECK(i.lo <= 0.0);
  CHECK(i.hi >= 7.0);
  CHECK(certified_sign(P("x0^2 + 1"), Box::all(1)) == 1);
  CHECK(certified_sign(P("x0"), Box::all(1)) == 0);
  CHECK(certified_sign(P("x0^2"), Box::all(1), true) == 1);
  CHECK(certified_sign(P("x0 - sqrt2"), Box{{2}, {3}}) == 1);
  // bisection resolves a sign the naive enclosure misses
  CHECK(certified_sign(P("x0^2 - x0 + 1"), Box{{-1}, {2}}) == 1);
}

TEST_CASE("exact one-sided jets") {
  std::vector<Scalar> p{Scalar(0)}, d{Scalar(1)};
  auto l = one_sided_series(P("abs(t)"), p, d, -1, 3);
  auto r = one_sided_series(P("abs(t)"), p, d, 1, 3);
  REQUIRE(l);
  REQUIRE(r);
  CHECK(series_derivatives(*l)[1] == Scalar(-1));
  CHECK(series_derivatives(*r)[1] == Scalar(1));
  // norm(t, t) = sqrt2 |t|
  auto n = one_sided_series(Expr::norm({t(), t()}), p, d, 1, 2);
  REQUIRE(n);
  CHECK((*n)[1] == Scalar::sqrt2());
  CHECK(exact_sqrt(Scalar(3) + Scalar(2) * Scalar::sqrt2()) == Scalar(1) + Scalar::sqrt2());
  CHECK_FALSE(exact_sqrt(Scalar(3)));
}

TEST_CASE("flat jets vanish to order 6") {
  // exact side: every one-sided Taylor coefficient is 0
  std::vector<Scalar> p{Scalar(0)}, d{Scalar(1)};
  for (int side : {-1, 1}) {
    auto s = one_sided_series(Expr::flat(t()), p, d, side, 6);
    REQUIRE(s);
    for (const Scalar& c : *s) CHECK(c.is_zero());
  }
  // brute-force side: the n-th derivative expression decays along t -> 0
  for (unsigned n = 1; n <= 6; ++n) {
    Expr dn = differentiate_n(Expr::flat(t()), 0, n).expr;
    double prev = INFINITY;
    for (int k = 0; k <= 4; ++k) {
      double x[1] = {std::pow(10.0, -1.0 - 0.5 * k)};
      double v = std::fabs(evaluate(dn, x));
      CHECK(v <= prev);
      prev = v;
    }
    CHECK(prev < 1e-20);
    double zero[1] = {0.0};
    CHECK(evaluate(dn, zero) == 0.0);
  }
}

TEST_CASE("flat derivative against central differences") {
  Expr d1 = differentiate(Expr::flat(t()), 0).expr;
  for (double x0 : {0.5, 0.3, 0.2}) {
    double h = 1e-6;
    double xp[1] = {x0 + h}, xm[1] = {x0 - h}, xx[1] = {x0};
    double fd = (evaluate(Expr::flat(t()), xp) - evaluate(Expr::flat(t()), xm)) / (2 * h);
    double exact = 2 / (x0 * x0 * x0) * std::exp(-1 / (x0 * x0));
    CHECK(evaluate(d1, xx) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(fd == doctest::Approx(exact).epsilon(1e-5));
  }
}

TEST_CASE("certify_smooth examples") {
  auto flat = certify_smooth(Expr::flat(t()), 1);
  CHECK(flat.smooth());
  CHECK_FALSE(flat.trace.empty());

  auto a = certify_smooth(P("abs(x0)"), 1);
  REQUIRE(a.not_ck());
  CHECK(a.order == 1);
  REQUIRE(a.point.size() == 1);
  CHECK(a.point[0].is_zero());
  REQUIRE(a.jets);
  CHECK(a.jets->left.back() == Scalar(-1));
  CHECK(a.jets->right.back() == Scalar(1));
  CHECK(recheck_not_ck(P("abs(x0)"), a));

  auto c = certify_smooth(P("cases(t; flat(t), 0, 0)"), 1);
  CHECK(c.smooth());

  CHECK(certify_smooth(P("recip(x0 - sqrt2)"), Box{{2}, {5}}).smooth());
  CHECK_FALSE(certify_smooth(P("recip(x0)"), 1).smooth());
  CHECK(certify_smooth(P("cases(t; -1, 0, 1)"), 1).order == 0);
  CHECK(certify_smooth(P("flat(t) * recip(t)"), 1).smooth());
  CHECK(certify_smooth(P("abs(x0 - 1/3) * x1", 2), 2).not_ck());
}

TEST_CASE("flat-dominated quotients in two variables") {
  Expr n = Expr::norm({Expr::var(0), Expr::var(1)});
  Expr fl = Expr::flat(n);
  Expr u = Expr::cases(n, Expr(), Expr(), fl * fl * (n + Expr::var(0)) * Expr::recip(n));
  auto v = certify_smooth(u, 2);
  CHECK(v.smooth());
  auto bad = certify_smooth(n, 2);
  CHECK(bad.not_ck());
  CHECK(recheck_not_ck(n, bad));
}

TEST_CASE("ck_regularity") {
  for (unsigned k = 1; k <= 4; ++k) {
    Expr e = P("abs(t)") * Expr::pow(t(), k);
    auto v = ck_regularity(e, static_cast<int>(k), Scalar(0));
    CHECK(v.result == Outcome::Yes);
    REQUIRE(v.mismatch_order == static_cast<int>(k) + 1);
    // one-sided (k+1)-th derivatives are -(k+1)! and (k+1)!
    double fact = std::tgamma(k + 2.0);
    CHECK(v.left.back() == Scalar(static_cast<long>(-fact)));
    CHECK(v.right.back() == Scalar(static_cast<long>(fact)));
    REQUIRE(v.divergence);
    CHECK(v.divergence->divergent);
  }
  CHECK(ck_regularity(P("t^2"), 1, Scalar(0)).result == Outcome::No);
  CHECK(ck_regularity(P("abs(t)"), 0, Scalar(0)).result == Outcome::Yes);
  CHECK(ck_regularity(P("abs(t)"), 1, Scalar(0)).result == Outcome::No);
  CHECK(ck_regularity(P("abs(t - 1/2)"), 0, Scalar::ratio(1, 2)).result == Outcome::Yes);
}

TEST_CASE("probe records") {
  std::vector<Scalar> p{Scalar(0)}, d{Scalar(1)};
  auto r = first_divergence(P("abs(t) * t"), p, d);
  REQUIRE(r);
  CHECK(r->order == 2);
  CHECK(r->growth() >= kGrowthFactor);
  CHECK(recheck_divergence(P("abs(t) * t"), *r));
  CHECK_FALSE(first_divergence(P("t^3 + sin(t)"), p, d));
  CHECK_FALSE(first_divergence(Expr::flat(t()), p, d));
}

TEST_CASE("parallel probe batch matches serial") {
  Expr e = P("abs(x0 - x1) * x0 + cases(x1; 0, 0, x1^2)", 2);
  std::vector<ProbeTask> tasks;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    long a = static_cast<long>(rng() % 9) - 4, b = static_cast<long>(rng() % 9) - 4;
    tasks.push_back({{Scalar::ratio(a, 4), Scalar::ratio(a, 4)}, {Scalar(1), Scalar(b)}});
  }
  auto s = probe_batch_serial(e, tasks);
  auto q = probe_batch_parallel(e, tasks);
  REQUIRE(s.size() == q.size());
  int divergent = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(s[i].has_value() == q[i].has_value());
    if (!s[i]) continue;
    ++divergent;
    CHECK(s[i]->order == q[i]->order);
    CHECK(s[i]->quotients == q[i]->quotients);
  }
  CHECK(divergent > 0);
}

TEST_CASE("soundness: certified-smooth expressions never diverge under the probe") {
  ExprSampler sampler(2, 99);
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> coord(-2, 2);
  int certified = 0, tested = 0;
  for (int i = 0; i < 120; ++i) {
    Expr e = sampler.any(3);
    if (!desk_scale(normal_form(e))) continue;
    auto v = certify_smooth(e, 2);
    ++tested;
    if (!v.smooth()) continue;
    ++certified;
    for (int j = 0; j < 50; ++j) {
      std::vector<Scalar> p{Scalar(Rational(coord(rng))), Scalar(Rational(coord(rng)))};
      std::vector<Scalar> d{Scalar(Rational(coord(rng))), Scalar(Rational(coord(rng)))};
      auto r = first_divergence(e, p, d);
      INFO(e.str());
      CHECK_FALSE((r && r->divergent));
    }
  }
  MESSAGE("certified " << certified << " of " << tested);
  CHECK(certified > 10);
}

TEST_CASE("not-ck verdicts re-verify from their data") {
  ExprSampler sampler(2, 5);
  int found = 0;
  for (int i = 0; i < 80; ++i) {
    Expr e = sampler.any(3);
    auto v = certify_smooth(e, 2);
    if (!v.not_ck()) continue;
    ++found;
    INFO(e.str());
    CHECK(recheck_not_ck(e, v));
  }
  CHECK(found > 3);
}
