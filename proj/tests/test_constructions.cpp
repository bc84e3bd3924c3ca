#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "smoothkit/constructions.hpp"
#include "smoothkit/galois.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/sampler.hpp"

using namespace smoothkit;

namespace {
const std::string kData = SMOOTHKIT_DATA_DIR;

Expr P(std::string_view s, int dim) { return parse_expr(s, dim); }

SpacePresentation gallery(const std::string& name) {
  return load_presentation_file(kData + "/gallery/" + name + ".json");
}

std::set<std::string> nf_set(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const Expr& e : es) out.insert(normal_form(e).str());
  return out;
}

PlotGen curve(std::vector<Expr> c) { return PlotGen::make(std::move(c), 1); }
}  // namespace

TEST_CASE("quotient differential structures by finite groups") {
  auto q = quotient_differential(standard_space(2), FiniteMatrixGroup::plus_minus(2), 2);
  CHECK(nf_set(q.fn_generators) == nf_set({P("x0^2", 2), P("x0*x1", 2), P("x1^2", 2)}));
  for (int n = 1; n <= 4; ++n) {
    auto s = quotient_differential(standard_space(n), FiniteMatrixGroup::sign_flips(n), 2);
    std::vector<Expr> want;
    for (int i = 0; i < n; ++i) want.push_back(Expr::pow(Expr::var(i), 2));
    CHECK(nf_set(s.fn_generators) == nf_set(want));
    for (const Expr& g : s.fn_generators) CHECK(is_invariant(g, FiniteMatrixGroup::sign_flips(n)));
  }
  CHECK_THROWS_AS(quotient_differential(standard_space(2), FiniteMatrixGroup::plus_minus(2), 2, {P("x0 + x1", 2)}),
                  std::invalid_argument);
  // supplied invariant generators are kept as given
  auto s = quotient_differential(standard_space(2), FiniteMatrixGroup::plus_minus(2), 2, {P("x0^2 + x1^2", 2)});
  CHECK(s.fn_generators.size() == 1);
}

TEST_CASE("flow quotient keeps only constants") {
  auto q = quotient_differential_flow(standard_space(2), Scalar::sqrt2());
  for (const Expr& g : q.fn_generators) CHECK(to_poly(g).is_constant());
  CHECK(flow_invariant(Expr::constant(Scalar(3)), Scalar::sqrt2()));
  CHECK_FALSE(flow_invariant(P("x0", 2), Scalar::sqrt2()));
  CHECK(flow_invariant(P("x1 - sqrt2*x0", 2), Scalar::sqrt2()));
  CHECK_THROWS(quotient_differential_flow(standard_space(2), Scalar::ratio(1, 3)));
}

TEST_CASE("torus invariants against a brute-force lattice count") {
  for (int n = 1; n <= 10; ++n) {
    TorusReport r = torus_invariants(Scalar::sqrt2(), n);
    // the constant plus one sin/cos pair per frequency pair up to sign
    int pairs = 0, invariant = 0;
    for (int m = -n; m <= n; ++m)
      for (int k = -n; k <= n; ++k) {
        if (m == 0 && k == 0) continue;
        ++pairs;
        if (std::abs(m + std::sqrt(2.0) * k) < 1e-12) ++invariant;
      }
    CHECK(r.basis_size == 1 + pairs);
    CHECK(r.dimension == 1 + invariant);
    CHECK(r.dimension == 1);
  }
  CHECK_THROWS_AS(torus_invariants(Scalar::ratio(1, 2), 3), std::invalid_argument);
  CHECK_THROWS_AS(torus_invariants(Scalar::sqrt2(), 0), std::invalid_argument);
}

TEST_CASE("step plots into the irrational torus") {
  SpacePresentation t = gallery("torus");
  PlotGen half = curve({Expr(), P("cases(t; 0, 1/2, 1/2)", 1)});
  auto w = step_obstruction(half, Scalar::sqrt2());
  REQUIRE(w);
  CHECK(recheck_step(*w));
  Verdict v = plot_member(t, half);
  CHECK(v.is_no());
  // a jump inside the lattice is not an obstruction
  PlotGen lat = curve({Expr(), P("cases(t; 0, 1 + sqrt2, 1 + sqrt2)", 1)});
  CHECK_FALSE(step_obstruction(lat, Scalar::sqrt2()));
  CHECK_FALSE(plot_member(t, lat).is_no());
  CHECK(plot_member(t, curve({P("t", 1), P("t^2", 1)})).is_yes());
}

TEST_CASE("zadka plot has no continuous lift") {
  FiniteMatrixGroup g = FiniteMatrixGroup::plus_minus(2);
  std::vector<Expr> inv{P("x0^2", 2), P("x0*x1", 2), P("x1^2", 2)};
  LiftResult r = lift_witness(zadka_plot(), g, inv, {Scalar(0), Scalar(0)}, Scalar::ratio(1, 2));
  REQUIRE(r.witness);
  CHECK(r.witness->holonomy == 1);
  // the lift has norm e^{-1/r^2}; the two representatives are 2 e^{-4} apart
  CHECK(r.witness->separation >= 2 * std::exp(-4.0) * (1 - 1e-6));
  CHECK(r.witness->separation == doctest::Approx(2 * std::exp(-4.0)).epsilon(0.05));
  CHECK(r.witness->max_step < r.witness->separation / 2);
  CHECK(r.witness->samples == 360);
  CHECK(recheck_lift(*r.witness));
  // a plot of the form pi o q lifts
  PlotGen q = PlotGen::make(compose_all(inv, std::vector<Expr>{P("x0", 2), P("x1 + 1", 2)}), 2);
  q.orbit_coords = true;
  CHECK_FALSE(lift_witness(q, g, inv, {Scalar(0), Scalar(0)}, Scalar::ratio(1, 2)).witness);
}

TEST_CASE("zadka compositions are smooth for monomials up to degree 3") {
  PlotGen p = zadka_plot();
  int count = 0;
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned b = 0; a + b <= 3; ++b)
      for (unsigned c = 0; a + b + c <= 3; ++c) {
        Expr g = Expr::product({Expr::pow(Expr::var(0), a), Expr::pow(Expr::var(1), b), Expr::pow(Expr::var(2), c)});
        CHECK(certify_smooth(compose(g, p.components), 2).smooth());
        ++count;
      }
  CHECK(count == 20);
}

TEST_CASE("wedge quotient and branch lifts") {
  QuotientPresentation w = wedge_quotient({1, 1});
  SpacePresentation wp = w.presentation();
  CHECK(wp.plot_generators.size() == 2);
  PlotGen fl = curve({P("cases(t; flat(t), 0, 0)", 1), P("cases(t; 0, 0, flat(t))", 1)});
  LiftResult r = lift_witness_wedge(fl, {1, 1}, Scalar(0));
  REQUIRE(r.witness);
  CHECK(recheck_lift(*r.witness));
  CHECK(plot_member(wp, fl).is_no());
  CHECK(plot_member(wp, curve({P("t^2", 1), Expr()})).is_yes());
  CHECK_FALSE(lift_witness_wedge(curve({P("t", 1), Expr()}), {1, 1}, Scalar(0)).witness);
}

TEST_CASE("orthant membership through the square map") {
  CHECK(orthant_membership(P("x0", 1), 1).is_yes());
  CHECK(orthant_membership(P("x0*x1", 2), 2).is_yes());
  Verdict v = orthant_membership_pullback(P("abs(x0)", 1), 1);
  REQUIRE(v.is_no());
  CHECK(recheck_witness(*v.witness));
  CHECK_THROWS_AS(orthant_membership_pullback(P("x0", 1), 1), std::invalid_argument);
  // membership implies the pullback survives curve probing
  ExprSampler s(2, 11);
  for (int i = 0; i < 20; ++i) {
    Expr f = s.r1(2);
    if (orthant_membership(f, 2).is_yes())
      CHECK_FALSE(boman_smoothness(compose(f, square_map(2)), PlotGen::make({P("x0", 2), P("x1", 2)}, 2), 10, 5).is_no());
  }
}

TEST_CASE("subset structures") {
  SpacePresentation e = gallery("two_axes");
  SpacePresentation d = subset_diffeology(standard_space(2), e.carrier);
  SpacePresentation f = subset_differential(standard_space(2), e.carrier);
  CHECK(d.construction == "subset");
  CHECK(f.fn_generators.size() == 2);
  PlotGen fl = curve({P("cases(t; flat(t), 0, 0)", 1), P("cases(t; 0, 0, flat(t))", 1)});
  CHECK(plot_member(d, fl).is_yes());
  Verdict off = plot_member(d, curve({P("t", 1), P("t", 1)}));
  REQUIRE(off.is_no());
  CHECK(recheck_witness(*off.witness));
  CHECK(plot_member(d, curve({Expr(), Expr::constant(Scalar(5))})).is_yes());
  // rationals: recip(x - sqrt2) is total on Q
  SpacePresentation q = gallery("rationals");
  CHECK(function_member(q, P("recip(x0 - sqrt2)", 1)).is_yes());
}

TEST_CASE("subset commutation on gallery subsets") {
  // subset diffeology of the standard plots against Pi of the subset functions
  for (const char* name : {"orthant", "two_axes", "three_lines"}) {
    SpacePresentation y = gallery(name);
    SpacePresentation d = subset_diffeology(standard_space(2), y.carrier);
    SpacePresentation pi = pi_of(y.fn_generators, y.carrier);
    std::vector<PlotGen> cands = {
        curve({P("t^2", 1), Expr()}),
        curve({Expr(), P("t^4 + 1", 1)}),
        curve({P("t", 1), P("t", 1)}),
        curve({P("abs(t)", 1), Expr()}),
        curve({P("flat(t)", 1), Expr()}),
        curve({P("cases(t; flat(t), 0, 0)", 1), P("cases(t; 0, 0, flat(t))", 1)}),
        curve({P("t^2", 1), P("t^2", 1)}),
        curve({P("sin(t)^2", 1), Expr()}),
        curve({Expr::constant(Scalar(2)), Expr()}),
        curve({P("t", 1), Expr()}),
        curve({P("cases(t; 0, 0, flat(t))", 1), P("cases(t; 0, 0, flat(t))", 1)}),
        curve({P("t^2 + 1", 1), P("1", 1)}),
        curve({P("abs(t)", 1), P("abs(t)", 1)}),
        curve({Expr(), P("cos(t) + 2", 1)}),
        curve({P("t^3", 1), P("t^3", 1)}),
        curve({Expr(), P("flat(t - 1)", 1)}),
        curve({P("t^2*(t - 1)^2", 1), Expr()}),
        curve({P("-t^2", 1), Expr()}),
        curve({P("t + 1", 1), P("t", 1)}),
        curve({P("abs(t)^3", 1), Expr()}),
    };
    int compared = 0;
    for (const PlotGen& p : cands) {
      Verdict a = plot_member(d, p), b = plot_member(pi, p);
      CHECK_MESSAGE(!contradicts(a, b), name << " " << plot_to_json(p).dump());
      compared += !a.is_unknown() && !b.is_unknown();
    }
    CHECK(compared >= 18);
  }
}

TEST_CASE("quotient commutation on R^2 / +-I") {
  SpacePresentation z = gallery("zadka");
  std::vector<PlotGen> id{PlotGen::make({P("x0", 2), P("x1", 2)}, 2)};
  ExprSampler s(3, 21);
  std::vector<Expr> inv{P("x0^2", 2), P("x0*x1", 2), P("x1^2", 2)};
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    Expr g = i % 2 ? s.polynomial(2, 3) : Expr::abs(s.polynomial(1, 2));
    Expr f = compose(g, inv);
    Verdict a = function_member(z, f), b = phi_contains(id, f, 2);
    CHECK(!contradicts(a, b));
    agree += a.outcome == b.outcome;
  }
  CHECK(agree >= 18);
}

TEST_CASE("resolve_side picks branches") {
  Expr e = P("cases(t; t^2, 0, t + abs(t - 1))", 1);
  auto l = resolve_side(e, Scalar(0), -1), r = resolve_side(e, Scalar(0), 1);
  REQUIRE(l);
  REQUIRE(r);
  CHECK(equal_nf(*l, P("t^2", 1)));
  CHECK(equal_nf(*r, P("t + (1 - t)", 1)));
}

TEST_CASE("express in generators") {
  std::vector<Expr> gens{P("x0^2", 2), P("x0*x1", 2), P("x1^2", 2)};
  auto e = express_in_generators(P("x0^4 + 3*x0*x1^3", 2), gens, 2);
  REQUIRE(e);
  CHECK(equal_nf(compose(*e, gens), P("x0^4 + 3*x0*x1^3", 2)));
  CHECK_FALSE(express_in_generators(P("x0", 2), gens, 2));
}
