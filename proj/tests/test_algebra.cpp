#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "smoothkit/invariants.hpp"
#include "smoothkit/invring.hpp"
#include "smoothkit/linalg.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/presentation.hpp"
#include "smoothkit/sampler.hpp"

using namespace smoothkit;

namespace {
const std::string kData = SMOOTHKIT_DATA_DIR;

Expr P(std::string_view s, int dim) { return parse_expr(s, dim); }

std::set<std::string> nf_set(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const Expr& e : es) out.insert(normal_form(e).str());
  return out;
}

Matrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    Matrix m = zeros(n, n);
    for (auto& row : m)
      for (auto& v : row) {
        long a = static_cast<long>(rng() % 7) - 3, b = static_cast<long>(rng() % 3) - 1;
        v = Scalar(Rational(a, 2), Rational(b));
      }
    if (!determinant(m).is_zero()) return m;
  }
}
}  // namespace

TEST_CASE("exact rank, solve, inverse") {
  Matrix a{{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(4)}};
  CHECK(rank(a) == 1);
  CHECK(determinant(a).is_zero());
  Matrix b{{Scalar(1), Scalar::sqrt2()}, {Scalar::sqrt2(), Scalar(3)}};
  CHECK(rank(b) == 2);
  CHECK(determinant(b) == Scalar(1));
  auto x = solve(b, {Scalar(1), Scalar(0)});
  REQUIRE(x);
  CHECK(mat_vec(b, *x) == std::vector<Scalar>{Scalar(1), Scalar(0)});
  CHECK_FALSE(solve(a, {Scalar(1), Scalar(0)}));
  auto ns = nullspace(a, 2);
  REQUIRE(ns.size() == 1);
  CHECK(mat_vec(a, ns[0]) == std::vector<Scalar>{Scalar(0), Scalar(0)});
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Matrix m = random_invertible(rng, 3);
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(is_identity(multiply(m, *inv)));
  }
}

TEST_CASE("groups load and validate") {
  auto g = load_group_file(kData + "/groups/z2_pm_r2.json");
  CHECK(g.order() == 2);
  CHECK(g.dim() == 2);
  CHECK(load_group_file(kData + "/groups/dihedral16_r2.json").order() == 16);
  CHECK(load_group_file(kData + "/groups/sign_flips_r3.json").order() == 8);
  try {
    (void)load_group_file(kData + "/groups/missing_inverse.json");
    FAIL("expected a closure error");
  } catch (const PresentationError& e) {
    CHECK(std::string(e.what()).find("closure") != std::string::npos);
  }
  Matrix shear{{Scalar(1), Scalar(1)}, {Scalar(0), Scalar(1)}};
  CHECK_THROWS_AS(FiniteMatrixGroup::make({identity(2), shear}), PresentationError);
  CHECK(load_group(save_group(g)).elements() == g.elements());
}

TEST_CASE("presentations load, validate and round-trip") {
  for (const char* name : {"three_lines", "three_axes", "two_axes", "wedge", "wire", "rationals", "ck2",
                           "torus", "zadka", "orthant"}) {
    INFO(name);
    SpacePresentation p = load_presentation_file(kData + "/gallery/" + name + ".json");
    std::string once = save_presentation(p);
    SpacePresentation q = load_presentation(once, kData + "/gallery");
    CHECK(save_presentation(q) == once);
    auto rep = validate_presentation(p);
    CHECK(rep.unknown == 0);
  }
  auto s = load_presentation_file(kData + "/gallery/three_lines.json");
  CHECK(s.carrier.kind == CarrierKind::Subset);
  CHECK(s.fn_generators.size() == 2);
  CHECK(s.carrier.contains(std::vector<Scalar>{Scalar(3), Scalar(3)}));
  CHECK_FALSE(s.carrier.contains(std::vector<Scalar>{Scalar(1), Scalar(2)}));
}

TEST_CASE("presentation errors carry JSON paths") {
  auto expect = [](std::string_view doc, std::string_view path) {
    try {
      (void)load_presentation(doc);
      FAIL("expected an error");
    } catch (const PresentationError& e) {
      CHECK(e.path == path);
    }
  };
  expect(R"J({"label": "x", "carrier": {"kind": "euclidean", "dim": "0"}})J", "/carrier/dim");
  expect(R"J({"label": "x", "carrier": {"kind": "euclidean", "dim": "1"}, "fn_generators": ["x1"]})J",
         "/fn_generators/0");
  expect(R"J({"label": "x", "carrier": {"kind": "euclidean", "dim": "2"},
             "plot_generators": [{"domain": {"dims": "1"}, "components": ["t"]}]})J",
         "/plot_generators/0/components");
  // incompatible generators: abs(x0) along the identity plot
  expect(R"J({"label": "x", "carrier": {"kind": "euclidean", "dim": "1"}, "fn_generators": ["abs(x0)"],
             "plot_generators": [{"domain": {"dims": "1"}, "components": ["t"]}]})J",
         "/plot_generators/0");
  // image leaves the subset
  expect(R"J({"label": "x", "carrier": {"kind": "subset", "dim": "2", "equations": ["x0*x1"]},
             "plot_generators": [{"domain": {"dims": "1"}, "components": ["t", "t"]}]})J",
         "/plot_generators/0");
  expect(R"J({"label": "x", "carrier": {"kind": "quotient_flow", "slope": "1/2"}})J", "/carrier/slope");
  expect(R"J({"label": "x", "carrier": {"kind": "subset", "dim": "2", "ideal_generators": ["x0"],
             "parametrizations": [{"domain": {"dims": "1"}, "components": ["t", "0"]}]}})J",
         "/carrier/ideal_generators/0");
}

TEST_CASE("standard space") {
  auto p = standard_space(2);
  CHECK(p.fn_generators.size() == 2);
  REQUIRE(p.plot_generators.size() == 1);
  CHECK(p.plot_generators[0].components[1] == Expr::var(1));
  CHECK(standard_space(1).label == "R^1");
  CHECK_THROWS(standard_space(0));
}

TEST_CASE("reynolds operator") {
  auto pm = FiniteMatrixGroup::plus_minus(2);
  CHECK(reynolds(P("x0", 2), pm).is_zero());
  CHECK(equal_nf(reynolds(P("x0^2", 2), pm), P("x0^2", 2)));
  // four sign patterns: (+1 -1 -1 +1)/4 of x0 x1
  CHECK(reynolds(P("x0*x1", 2), FiniteMatrixGroup::sign_flips(2)).is_zero());
  CHECK_THROWS(reynolds(P("abs(x0)", 2), pm));
}

TEST_CASE("reynolds is an idempotent projection onto invariants") {
  auto d16 = load_group_file(kData + "/groups/dihedral16_r2.json");
  ExprSampler sampler(2, 17);
  for (int i = 0; i < 100; ++i) {
    Expr e = sampler.polynomial(4, 4);
    const FiniteMatrixGroup& g = (i % 2) ? d16 : FiniteMatrixGroup::sign_flips(2);
    Expr r = reynolds(e, g);
    CHECK(is_invariant(r, g));
    CHECK(equal_nf(reynolds(r, g), r));
  }
}

TEST_CASE("invariant generators") {
  auto pm = load_group_file(kData + "/groups/z2_pm_r2.json");
  auto gens = invariant_generators(pm, 2);
  CHECK(nf_set(gens) == nf_set({P("x0^2", 2), P("x0*x1", 2), P("x1^2", 2)}));
  CHECK(gens[0].str() == normal_form(P("x0^2", 2)).str());
  for (int n = 1; n <= 4; ++n) {
    auto g = FiniteMatrixGroup::sign_flips(n);
    std::vector<Expr> want;
    for (int i = 0; i < n; ++i) want.push_back(Expr::pow(Expr::var(i), 2));
    CHECK(nf_set(invariant_generators(g, 2)) == nf_set(want));
  }
  auto triv = invariant_generators(FiniteMatrixGroup::trivial(3), 1);
  CHECK(nf_set(triv) == nf_set({Expr::var(0), Expr::var(1), Expr::var(2)}));
  // dihedral of order 8: x^2 + y^2 in degree 2; degree 4 adds x^2 y^2 (x^4 + y^4 is not new)
  auto d8 = invariant_generators(load_group_file(kData + "/groups/dihedral8_r2.json"), 4);
  CHECK(d8.size() == 2);
  for (std::size_t i = 0; i < d8.size(); ++i) CHECK(is_needed(d8, i, 2));
  for (const auto& g : d8) CHECK(is_invariant(g, load_group_file(kData + "/groups/dihedral8_r2.json")));
  for (std::size_t i = 0; i < gens.size(); ++i) CHECK(is_needed(gens, i, 2));
  // a redundant set is detected
  std::vector<Expr> redundant = gens;
  redundant.push_back(P("x0^4", 2));
  CHECK_FALSE(is_needed(redundant, 3, 2));
}

TEST_CASE("cone image of the +-I Hilbert map") {
  auto h = hilbert_map(FiniteMatrixGroup::plus_minus(2), 2);
  REQUIRE(h.target_dim() == 3);
  auto rep = cone_image_check(h, standard_cone_change(), 1000, 42);
  CHECK(rep.identity_holds);
  CHECK(rep.samples == 1000);
  CHECK(rep.passed());
  CHECK(rep.min_z.sign() >= 0);
  // a wrong change fails symbolically
  Matrix wrong = identity(3);
  CHECK_FALSE(cone_image_check(h, wrong, 10, 1).identity_holds);
  CHECK_THROWS(cone_image_check(h, zeros(3, 3), 10, 1));
}

TEST_CASE("zariski tangent dimensions") {
  auto s = load_presentation_file(kData + "/gallery/three_lines.json");
  auto e = load_presentation_file(kData + "/gallery/three_axes.json");
  CHECK(zariski_tangent_dim(s.carrier, {Scalar(0), Scalar(0)}).tangent_dim == 2);
  CHECK(zariski_tangent_dim(e.carrier, {Scalar(0), Scalar(0), Scalar(0)}).tangent_dim == 3);
  CHECK(zariski_tangent_dim(s.carrier, {Scalar(1), Scalar(1)}).tangent_dim == 1);
  CHECK(zariski_tangent_dim(Carrier::euclidean(4), std::vector<Scalar>(4, Scalar(1))).tangent_dim == 4);
  CHECK_THROWS(zariski_tangent_dim(s.carrier, {Scalar(1), Scalar(2)}));
}

TEST_CASE("tangent dimension is invariant under exact linear changes") {
  auto s = load_presentation_file(kData + "/gallery/three_lines.json");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    Matrix m = random_invertible(rng, 2);
    Matrix minv = *inverse(m);
    // generators g(M x) vanish on M^{-1} S; the origin maps to itself, (1,1) to M^{-1}(1,1)
    Carrier c = s.carrier;
    std::vector<Expr> subs;
    for (const auto& row : m)
      subs.push_back(Expr::constant(row[0]) * Expr::var(0) + Expr::constant(row[1]) * Expr::var(1));
    c.equations = compose_all(s.carrier.equations, subs);
    c.ideal_generators = compose_all(*s.carrier.ideal_generators, subs);
    for (auto pt : {std::vector<Scalar>{Scalar(0), Scalar(0)}, std::vector<Scalar>{Scalar(1), Scalar(1)}}) {
      auto before = zariski_tangent_dim(s.carrier, pt).tangent_dim;
      CHECK(zariski_tangent_dim(c, mat_vec(minv, pt)).tangent_dim == before);
    }
  }
}

TEST_CASE("rank obstruction") {
  auto id = PlotGen::make({Expr::var(0), Expr::var(1)}, 2);
  auto r = rank_obstruction(id, 10, 1);
  REQUIRE(r);
  CHECK(r->rank == 2);
  CHECK(r->exact);
  CHECK_FALSE(rank_obstruction(PlotGen::make({Expr::var(0), P("x0^2", 2)}, 2), 50, 1));
  auto fl = rank_obstruction(PlotGen::make({Expr::flat(Expr::var(0)), Expr::var(1)}, 2), 10, 1);
  REQUIRE(fl);
  CHECK(fl->point == std::vector<Scalar>{Scalar(1), Scalar(0)});
  CHECK(fl->rank == 2);
  CHECK_FALSE(fl->exact);
}

TEST_CASE("rank obstruction never fires on plots through a curve") {
  ExprSampler sampler(2, 8);
  ExprSampler curve(1, 9);
  for (int i = 0; i < 20; ++i) {
    Expr g = sampler.r1(2);  // R^2 -> R
    std::vector<Expr> q{curve.r1(2), curve.r1(2)};
    std::vector<Expr> sub{g};
    auto p = PlotGen::make(compose_all(q, sub), 2);
    CHECK_FALSE(rank_obstruction(p, 30, static_cast<std::uint64_t>(i)));
  }
}

TEST_CASE("locally constant check on the rationals") {
  auto q = load_presentation_file(kData + "/gallery/rationals.json");
  auto c = locally_constant_check(PlotGen::make({Expr::var(0)}, 1), q.carrier);
  CHECK(c.status == ConstancyStatus::NotLocallyConstant);
  CHECK_FALSE(c.va == c.vb);
  CHECK(locally_constant_check(PlotGen::make({Expr::constant(Scalar::ratio(1, 2))}, 1), q.carrier).status ==
        ConstancyStatus::ConfirmedLocallyConstant);
  CHECK(locally_constant_check(PlotGen::make({parse_expr("cases(t; 0, 0, 1)", 1)}, 1), q.carrier).status ==
        ConstancyStatus::Unknown);
  CHECK_THROWS(locally_constant_check(PlotGen::make({Expr::var(0)}, 1), Carrier::euclidean(1)));
}

namespace {
std::vector<Slope> arr(std::initializer_list<const char*> s) {
  std::vector<Slope> out;
  for (auto* x : s) out.push_back(Slope::parse(x));
  return out;
}
}  // namespace

TEST_CASE("line arrangements") {
  auto c = lines_equivalence(arr({"0", "inf", "1"}), arr({"0", "inf", "2"}));
  REQUIRE(c.equivalent);
  Matrix diag{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(2)}};
  CHECK(c.matrix == diag);
  // cross-ratios 2 and 3 differ
  auto d = lines_equivalence(arr({"0", "inf", "1", "2"}), arr({"0", "inf", "1", "3"}));
  CHECK_FALSE(d.equivalent);
  CHECK(d.permutations_tried == 24);
  auto same = arr({"0", "sqrt2", "1/3", "inf"});
  CHECK(lines_equivalence(same, same).equivalent);
  CHECK_THROWS(lines_equivalence(arr({"1", "1"}), arr({"0", "2"})));
  CHECK(load_arrangement(R"(["0", "inf", "1", "sqrt2", "1/3"])").size() == 5);
}

TEST_CASE("line equivalence is an equivalence relation and linear-invariant") {
  std::mt19937_64 rng(30);
  auto random_arr = [&](std::size_t k) {
    std::vector<Slope> a;
    while (a.size() < k) {
      Slope s = (rng() % 6 == 0) ? Slope::parse("inf")
                                 : Slope{false, Scalar(Rational(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 3)))};
      if (std::find(a.begin(), a.end(), s) == a.end()) a.push_back(s);
    }
    return a;
  };
  for (int i = 0; i < 30; ++i) {
    std::size_t k = 3 + static_cast<std::size_t>(i % 3);
    auto a = random_arr(k);
    Matrix m1 = random_invertible(rng, 2), m2 = random_invertible(rng, 2);
    auto b = transform_arrangement(a, m1);
    auto c = transform_arrangement(b, m2);
    auto ab = lines_equivalence(a, b);
    auto bc = lines_equivalence(b, c);
    REQUIRE(ab.equivalent);
    REQUIRE(bc.equivalent);
    CHECK(lines_equivalence(a, a).equivalent);
    // symmetry: the inverse matrix certifies b -> a
    EquivalenceCertificate inv;
    inv.equivalent = true;
    inv.matrix = *inverse(ab.matrix);
    inv.permutation.resize(k);
    for (std::size_t j = 0; j < k; ++j) inv.permutation[ab.permutation[j]] = j;
    CHECK(verify_equivalence(b, a, inv));
    CHECK(lines_equivalence(b, a).equivalent);
    // transitivity: the product certifies a -> c
    EquivalenceCertificate comp;
    comp.equivalent = true;
    comp.matrix = multiply(bc.matrix, ab.matrix);
    comp.permutation.resize(k);
    for (std::size_t j = 0; j < k; ++j) comp.permutation[j] = bc.permutation[ab.permutation[j]];
    CHECK(verify_equivalence(a, c, comp));
    // an unrelated random arrangement of size >= 4 is generically inequivalent
    auto r = random_arr(k);
    auto rr = lines_equivalence(a, r);
    if (rr.equivalent) CHECK(verify_equivalence(a, r, rr));
  }
}
