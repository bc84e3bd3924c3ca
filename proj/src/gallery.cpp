#include "smoothkit/gallery.hpp"

#include <fnmatch.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>

#include "smoothkit/constructions.hpp"
#include "smoothkit/invariants.hpp"
#include "smoothkit/invring.hpp"
#include "smoothkit/jets.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/sampler.hpp"

namespace smoothkit {

std::string data_path(const std::string& rel) {
  const char* env = std::getenv("SMOOTHKIT_DATA");
  std::string base = env && *env ? env : SMOOTHKIT_DATA_DIR;
  return base + "/" + rel;
}

bool Claim::failed() const {
  if (cited) return false;
  if (check_failed) return true;
  return (expected == Outcome::Yes && verdict.is_no()) || (expected == Outcome::No && verdict.is_yes());
}

bool Claim::unexpected_unknown() const {
  return !cited && expected != Outcome::Unknown && verdict.is_unknown() && !check_failed;
}

std::string_view report_status_name(ReportStatus s) {
  switch (s) {
    case ReportStatus::AllCertified: return "AllCertified";
    case ReportStatus::HasRefutations: return "HasRefutations";
    case ReportStatus::HasUnknown: return "HasUnknown";
    case ReportStatus::Failed: break;
  }
  return "Failed";
}

ReportStatus Report::status() const {
  bool unknown = false;
  for (const Claim& c : claims) {
    if (c.failed()) return ReportStatus::Failed;
    unknown = unknown || c.unexpected_unknown();
  }
  // the headline refutation is the non-reflexivity witness
  bool refutes = reflexivity.status == Reflexivity::NonReflexive;
  if (expected_reflexivity != Reflexivity::Unknown) {
    if (reflexivity.status == Reflexivity::Unknown) unknown = true;
    else if (reflexivity.status != expected_reflexivity) return ReportStatus::Failed;
  }
  if (unknown) return ReportStatus::HasUnknown;
  return refutes ? ReportStatus::HasRefutations : ReportStatus::AllCertified;
}

json Report::to_json(bool with_runtimes) const {
  json j;
  j["id"] = id;
  j["title"] = title;
  j["status"] = report_status_name(status());
  json r;
  r["expected"] = reflexivity_name(expected_reflexivity);
  r["status"] = reflexivity_name(reflexivity.status);
  r["argument"] = reflexivity.argument;
  if (reflexivity.plot) r["plot"] = plot_to_json(*reflexivity.plot);
  if (reflexivity.function) r["function"] = reflexivity.function->str();
  if (reflexivity.in_roundtrip) r["in_roundtrip"] = verdict_json(*reflexivity.in_roundtrip);
  if (reflexivity.in_original) r["in_original"] = verdict_json(*reflexivity.in_original);
  j["reflexivity"] = r;
  json cs = json::array();
  for (const Claim& c : claims) {
    json cj;
    cj["text"] = c.text;
    cj["anchor"] = c.anchor;
    if (c.cited) {
      cj["cited"] = "cited, not checked";
    } else {
      cj["expected"] = outcome_name(c.expected);
      cj["outcome"] = outcome_name(c.verdict.outcome);
      cj["passed"] = !c.failed() && !c.unexpected_unknown();
      cj["verdict"] = verdict_json(c.verdict);
      if (!c.data.empty()) cj["data"] = c.data;
    }
    if (with_runtimes) cj["runtime_ms"] = c.runtime_ms;
    cs.push_back(cj);
  }
  j["claims"] = cs;
  if (with_runtimes) j["runtime_ms"] = runtime_ms;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

class Builder {
 public:
  Builder(std::string id, std::string title, std::string anchor) : anchor_(std::move(anchor)) {
    r_.id = std::move(id);
    r_.title = std::move(title);
    start_ = mark_ = Clock::now();
  }

  Claim& add(std::string text, Outcome expected, Verdict v, json data = json::object()) {
    Claim c;
    c.text = std::move(text);
    c.anchor = anchor_;
    c.expected = expected;
    if (v.witness) {
      bool ok = recheck_witness(*v.witness);
      data["witness_recheck"] = ok;
      if (!ok) c.check_failed = true;
    }
    c.verdict = std::move(v);
    c.data = std::move(data);
    return push(std::move(c));
  }

  Claim& check(std::string text, bool ok, json data = json::object()) {
    Claim c;
    c.text = std::move(text);
    c.anchor = anchor_;
    c.expected = Outcome::Yes;
    c.verdict = ok ? Verdict::yes({"check holds"}) : Verdict::unknown("check failed");
    c.check_failed = !ok;
    c.data = std::move(data);
    return push(std::move(c));
  }

  void cite(std::string text) {
    Claim c;
    c.text = std::move(text);
    c.anchor = anchor_;
    c.cited = true;
    c.expected = Outcome::Unknown;
    c.verdict = Verdict::unknown("cited, not checked");
    push(std::move(c));
  }

  Report finish(Reflexivity expected, ReflexivityReport rr) {
    r_.expected_reflexivity = expected;
    r_.reflexivity = std::move(rr);
    r_.runtime_ms = ms_since(start_);
    return std::move(r_);
  }

 private:
  Claim& push(Claim c) {
    c.runtime_ms = ms_since(mark_);
    mark_ = Clock::now();
    r_.claims.push_back(std::move(c));
    return r_.claims.back();
  }

  Report r_;
  std::string anchor_;
  Clock::time_point start_, mark_;
};

SpacePresentation load(const std::string& name) {
  return load_presentation_file(data_path("gallery/" + name + ".json"));
}

Expr ex(const char* text, int dim) { return parse_expr(text, dim); }

std::vector<Expr> coords(int n) {
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(Expr::var(i));
  return c;
}

PlotGen id_plot(int n) { return PlotGen::make(coords(n), n); }

PlotGen curve(std::vector<Expr> comps) { return PlotGen::make(std::move(comps), 1); }

std::string wit(const Verdict& v) { return v.witness ? std::string(witness_kind(*v.witness)) : ""; }

// counts agreement with a known membership list
struct Agreement {
  int agree = 0, unknown = 0, contradictions = 0;
  void add(const Verdict& v, bool member) {
    if (v.is_unknown()) ++unknown;
    else if (v.is_yes() == member) ++agree;
    else ++contradictions;
  }
  json to_json(int total) const {
    return json{{"candidates", total}, {"agree", agree}, {"unknown", unknown}, {"contradictions", contradictions}};
  }
};

Expr nonconstant_poly(ExprSampler& s, int degree, int terms) {
  for (;;) {
    Expr p = s.polynomial(degree, terms);
    if (!to_poly(p).is_constant()) return p;
  }
}

// ---------------------------------------------------------------------------

Report wire(std::uint64_t seed) {
  Builder b("wire", "wire diffeology on R^2", "wire diffeology example");
  SpacePresentation w = load("wire");
  PlotGen id2 = id_plot(2);
  struct Known {
    const char* f;
    bool smooth;
  };
  const Known pool[] = {
      {"x0", true},
      {"x0*x1 + x1^3", true},
      {"sin(x0) + cos(x1)", true},
      {"flat(x0 - 1/2)*x1", true},
      {"x0^2 + x1^2", true},
      {"recip(1 + x0^2)", true},
      {"flat(x0)*flat(x1)", true},
      {"cases(x0; 0, 0, flat(x0))", true},
      {"sin(x0*x1)", true},
      {"x1^4 - x0", true},
      {"abs(x0)", false},
      {"abs(x0 - x1)", false},
      {"abs(x1)*x0", false},
      {"cases(x0; 0, 0, x1 + 1)", false},
      {"norm(x0, x1)", false},
      {"abs(x1)^3", false},
      {"abs(x0 + 2*x1) + x1", false},
      {"cases(x1; 0, 0, x0 + 1)", false},
      {"abs(x0)*abs(x1) + x0", false},
      {"abs(x0^2 - 1)", false},
  };
  Agreement probes, phi;
  int i = 0;
  for (const Known& k : pool) {
    Expr f = ex(k.f, 2);
    probes.add(boman_smoothness(f, id2, 100, seed + static_cast<std::uint64_t>(i++)), k.smooth);
    phi.add(function_member(w, f), k.smooth);
  }
  json pd = probes.to_json(20);
  pd["probes_per_candidate"] = 100;
  b.check("100 probe curves per candidate agree with standard smoothness on 20 candidates of known status",
          probes.contradictions == 0 && probes.unknown <= 2, pd);
  b.check("Phi of the wire diffeology agrees with the standard structure on the same candidates",
          phi.contradictions == 0 && phi.unknown <= 2, phi.to_json(20));
  b.add("x0 is a function of the wire diffeology", Outcome::Yes, function_member(w, Expr::var(0)));
  b.add("abs(x0) is not", Outcome::No, function_member(w, ex("abs(x0)", 2)));
  b.add("the curve (t, t^2) is a wire plot", Outcome::Yes, plot_member(w, curve({Expr::var(0), ex("t^2", 1)})));
  b.add("(u, v) -> (u + v, (u + v)^3 - u - v) factors through a curve", Outcome::Yes,
        plot_member(w, PlotGen::make({ex("x0 + x1", 2), ex("(x0 + x1)^3 - x0 - x1", 2)}, 2)));
  b.check("(u, v) -> (u, u^2) has rank <= 1 at every sample", !rank_obstruction(PlotGen::make({ex("x0", 2), ex("x0^2", 2)}, 2), 20, seed));
  auto fr = rank_obstruction(PlotGen::make({ex("flat(x0)", 2), ex("x1", 2)}, 2), 20, seed);
  b.check("(u, v) -> (flat(u), v) has rank 2 at (1, 0)", fr && fr->rank == 2,
          fr ? json{{"point", scalars_json(fr->point)}, {"rank", fr->rank}} : json::object());
  b.add("the identity of R^2 is not a wire plot", Outcome::No, plot_member(w, id2));
  SpacePresentation rt = pi_of(coords(2), w.carrier, "Pi Phi wire = Pi of the coordinates");
  b.add("the identity is in Pi Phi of the wire diffeology", Outcome::Yes, plot_member(rt, id2));
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_plot(w, rt, id2));
}

Report rationals(std::uint64_t seed) {
  Builder b("rationals", "the rationals with the subset structure", "rational numbers example");
  SpacePresentation q = load("rationals");
  b.add("the inclusion x0 is in C^oo(Q)", Outcome::Yes, function_member(q, Expr::var(0)));
  b.add("recip(x0 - sqrt2) is in C^oo(Q)", Outcome::Yes, function_member(q, ex("recip(x0 - sqrt2)", 1)));
  b.add("recip(x0^2 - 2) is in C^oo(Q)", Outcome::Yes, function_member(q, ex("recip(x0^2 - 2)", 1)));
  Expr step = ex("cases(x0; 0, 0, 1)", 1);
  b.add("the step cases(x0; 0, 0, 1) is not in C^oo(Q)", Outcome::No, function_member(q, step));
  ExprSampler s(1, seed);
  int refuted = 0;
  json kinds = json::array();
  for (int i = 0; i < 20; ++i) {
    PlotGen p = curve({nonconstant_poly(s, 3, 3)});
    Verdict v = plot_member(q, p);
    bool ok = v.is_no() && wit(v) == "NotLocallyConstant" && recheck_witness(*v.witness);
    refuted += ok;
    if (i == 0) b.add("the seeded curve " + p.components[0].str() + " is not a plot of Q", Outcome::No, v);
  }
  b.check("20 nonconstant smooth curves are refuted as plots of Q", refuted == 20,
          json{{"candidates", 20}, {"refuted", refuted}});
  b.add("the constant curve 1/2 is a plot of Q", Outcome::Yes, plot_member(q, curve({Expr::constant(Scalar::ratio(1, 2))})));
  SpacePresentation rt = phi_of({}, q.carrier, "Phi Pi C^oo(Q): Phi of the locally constant plots");
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_function(q, rt, step));
}

Report ck(std::uint64_t seed) {
  Builder b("ck", "R with C^k functions, k = 1, 2, 3", "C^k example");
  SpacePresentation base = load("ck2");
  ReflexivityReport first;
  SpacePresentation std1 = standard_space(1);
  for (int k = 1; k <= 3; ++k) {
    SpacePresentation x = base;
    x.construction = "ck:" + std::to_string(k);
    x.label = "R with C^" + std::to_string(k) + " functions";
    std::string K = "C^" + std::to_string(k);
    b.add("t is in " + K, Outcome::Yes, function_member(x, Expr::var(0)));
    Expr lower = Expr::abs(Expr::var(0)) * Expr::pow(Expr::var(0), static_cast<unsigned>(k - 1));
    Expr upper = Expr::abs(Expr::var(0)) * Expr::pow(Expr::var(0), static_cast<unsigned>(k));
    b.add(lower.str() + " is not in " + K, Outcome::No, function_member(x, lower));
    b.add(upper.str() + " is in " + K, Outcome::Yes, function_member(x, upper));
    ExprSampler s(1, seed + static_cast<std::uint64_t>(k));
    std::vector<PlotGen> plots{curve({Expr::var(0)})};
    while (plots.size() < 10) plots.push_back(curve({nonconstant_poly(s, 3, 3)}));
    int refuted = 0;
    double min_growth = INFINITY;
    for (const PlotGen& p : plots) {
      Verdict v = plot_member(x, p);
      if (!v.is_no() || !v.witness) continue;
      const auto* w = std::get_if<CompositionNotSmooth>(&*v.witness);
      if (!w || !w->verdict.divergence || w->verdict.divergence->order != k + 1) continue;
      const DivergenceRecord& d = *w->verdict.divergence;
      double gr = d.growth();
      min_growth = std::min(min_growth, gr);
      if (d.divergent && gr >= 10 && recheck_witness(*v.witness)) ++refuted;
    }
    b.check("10 nonconstant plots are refuted in " + K + " with divergence of order " + std::to_string(k + 1) +
                " growing at least 10-fold over the probe steps",
            refuted == 10, json{{"candidates", 10}, {"refuted", refuted}, {"min_growth", min_growth}});
    b.add("the constant plot 3 is a plot of Pi " + K, Outcome::Yes, plot_member(x, curve({Expr::constant(Scalar(3))})));
    SpacePresentation rt = phi_of({}, x.carrier, "Phi Pi " + K + ": Phi of the constant plots");
    ReflexivityReport rr = nonreflexive_by_function(x, rt, lower);
    b.check(K + " is not reflexive (" + lower.str() + " in Phi Pi " + K + ")", rr.status == Reflexivity::NonReflexive);
    if (k == 1) first = rr;
  }
  SpacePresentation c2 = base;
  c2.construction = "ck:2";
  b.add("the identity from standard R to C^2 is not functionally smooth", Outcome::No,
        check_functionally_smooth({Expr::var(0)}, std1, c2));
  b.add("the identity from C^2 to standard R is functionally smooth", Outcome::Yes,
        check_functionally_smooth({Expr::var(0)}, c2, std1));
  return b.finish(Reflexivity::NonReflexive, first);
}

Report irrational_torus(std::uint64_t) {
  Builder b("irrational_torus", "the irrational torus T_alpha, alpha = sqrt2", "irrational flow example");
  SpacePresentation t = load("torus");
  json dims = json::array();
  bool all_one = true;
  for (int n = 1; n <= 10; ++n) {
    TorusReport r = torus_invariants(Scalar::sqrt2(), n);
    dims.push_back(r.dimension);
    all_one = all_one && r.dimension == 1;
  }
  TorusReport r10 = torus_invariants(Scalar::sqrt2(), 10);
  b.check("flow-invariant trigonometric polynomials of degree <= N are the constants, N = 1..10", all_one,
          json{{"dimensions", dims}, {"basis_size_N10", r10.basis_size}, {"note", r10.note}});
  bool rejected = false;
  try {
    torus_invariants(Scalar::ratio(1, 2), 3);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  b.check("a rational slope is rejected", rejected);
  b.check("1/2 is not in Z + sqrt2 Z (exact)", !in_integer_lattice(Scalar::ratio(1, 2), Scalar::sqrt2()));
  PlotGen step = curve({Expr(), ex("cases(t; 0, 1/2, 1/2)", 1)});
  b.add("the step plot with r = 1/2 is not a plot of T_alpha", Outcome::No, plot_member(t, step));
  PlotGen lattice_step = curve({Expr(), ex("cases(t; 0, 1 + sqrt2, 1 + sqrt2)", 1)});
  b.add("with r = 1 + sqrt2 the jump is in Z + sqrt2 Z and no obstruction is claimed", Outcome::Unknown,
        plot_member(t, lattice_step));
  b.add("pi o (t, t^2) is a plot of T_alpha", Outcome::Yes, plot_member(t, curve({Expr::var(0), ex("t^2", 1)})));
  Frolicher fr = frolicher_saturate({}, t.carrier);
  b.add("every curve composes smoothly with the constants, the step included", Outcome::Yes, fr.curve(step));
  SpacePresentation rt = pi_of({}, t.carrier, "Pi Phi D: Pi of the constants");
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_plot(t, rt, step));
}

Report irrational_line(std::uint64_t) {
  Builder b("irrational_line", "the irrational line L_alpha in the 2-torus", "irrational flow example");
  PlotGen c = curve({Expr::var(0), Expr::constant(Scalar::sqrt2()) * Expr::var(0)});
  b.add("t -> (t, sqrt2 t) is smooth into R^2, so [t, sqrt2 t] is a plot of L_alpha", Outcome::Yes,
        plot_member(standard_space(2), c));
  bool injective = !Scalar::sqrt2().is_rational();
  for (long m = 1; m <= 10; ++m) injective = injective && !(Scalar(m) * Scalar::sqrt2()).is_integer();
  b.check("t -> [t, sqrt2 t] is injective into the torus: m sqrt2 is not an integer for m = 1..10", injective);
  SpacePresentation t = load("torus");
  b.add("its image in T_alpha is a plot (a single flow line)", Outcome::Yes, plot_member(t, c));
  b.cite("L_alpha with the subset topology of the torus is not locally compact");
  b.cite("whether the differential structure of L_alpha determines alpha up to GL(2, Z) congruence is open");
  return b.finish(Reflexivity::Unknown, ReflexivityReport{});
}

Report orthogonal_quotient(std::uint64_t seed) {
  Builder b("orthogonal_quotient", "quotients of R^n by finite orthogonal groups", "orthogonal quotient example");
  auto same = [](const std::vector<Expr>& a, const std::vector<std::string>& b, int n) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!equal_nf(a[i], parse_expr(b[i], n))) return false;
    return true;
  };
  auto pm = FiniteMatrixGroup::plus_minus(2);
  HilbertMap h = hilbert_map(pm, 2);
  json gens = json::array();
  for (const Expr& g : h.generators) gens.push_back(g.str());
  b.check("+-I on R^2: invariant generators x0^2, x0*x1, x1^2", same(h.generators, {"x0^2", "x0*x1", "x1^2"}, 2),
          json{{"generators", gens}, {"note", h.note()}});
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::string> want;
    for (int i = 0; i < n; ++i) want.push_back("x" + std::to_string(i) + "^2");
    b.check("sign flips on R^" + std::to_string(n) + ": invariant generators x_i^2",
            same(invariant_generators(FiniteMatrixGroup::sign_flips(n), 2), want, n));
  }
  FiniteMatrixGroup d8 = load_group_file(data_path("groups/dihedral8_r2.json"));
  auto dg = invariant_generators(d8, 4);
  json dj = json::array();
  for (const Expr& g : dg) dj.push_back(g.str());
  b.check("dihedral group of order 8: two generators, of degrees 2 and 4", dg.size() == 2 &&
              expand_polynomial(dg[0], 2).begin()->first.size() == 2,
          json{{"generators", dj}});
  bool exact = true;
  for (const Expr& g : h.generators) exact = exact && is_invariant(g, pm);
  for (const Expr& g : dg) exact = exact && is_invariant(g, d8);
  b.check("every emitted generator is fixed by every group element (normal form)", exact);
  ConeReport cr = cone_image_check(h, standard_cone_change(), 1000, seed);
  b.check("the Hilbert map of +-I lands in the cone z^2 = x^2 + y^2, z >= 0", cr.passed(),
          json{{"identity", cr.identity_holds}, {"samples", cr.samples}, {"nonnegative", cr.nonnegative}, {"min_z", cr.min_z.str()}});
  bool threw = false;
  try {
    quotient_differential(standard_space(2), pm, 2, {Expr::var(0)});
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  b.check("a non-invariant supplied generator is rejected", threw);
  // quotient commutation on R^2 / +-I
  SpacePresentation z = load("zadka");
  const char* pos[] = {"x0^2 + x1^2",     "x0*x1",           "x0^4 - 3*x0*x1^3", "sin(x0*x1)",      "cos(x0)",
                       "flat(x0*x1 - 1)", "x0^2*x1^2 + 1",   "cos(x0 + x1)",     "recip(1 + x0^2)", "flat(x0)*cos(x1)"};
  const char* neg[] = {"abs(x0*x1)",        "norm(x0, x1)",       "abs(x0^2 - x1^2)", "abs(x0)*x0*x1",
                       "abs(x1)^3",         "cases(x0*x1; 0, 0, x0*x1)", "norm(x0, x1)^3", "abs(x0 + x1) + x0^2",
                       "abs(x0^2 + x0*x1 - 1)", "cases(x0^2 - x1^2; 0, 0, 1)"};
  Agreement quo, phi;
  int agree_sides = 0;
  std::vector<PlotGen> plots{id_plot(2)};
  for (int k = 0; k < 20; ++k) {
    bool member = k < 10;
    Expr f = ex(member ? pos[k] : neg[k - 10], 2);
    Verdict a = function_member(z, f);
    Verdict c = phi_contains(plots, f, 2, seed);
    quo.add(a, member);
    phi.add(c, member);
    agree_sides += a.outcome == c.outcome;
  }
  json qd = quo.to_json(20);
  qd["same_outcome"] = agree_sides;
  b.check("quotient differential structure and Phi of the quotient diffeology agree on 20 invariant candidates",
          quo.contradictions == 0 && phi.contradictions == 0 && agree_sides == 20 && quo.unknown == 0, qd);
  // O(n) model: |x|^2 under a rational rotation
  Expr r2 = ex("x0^2 + x1^2", 2);
  Expr rot = compose(r2, std::vector<Expr>{ex("3/5*x0 - 4/5*x1", 2), ex("4/5*x0 + 3/5*x1", 2)});
  b.check("|x|^2 is fixed by the rotation with cosine 3/5 (the O(n) model)", equal_nf(r2, rot));
  b.cite("the quotient diffeologies of R^n / O(n) are pairwise non-isomorphic for different n");
  SpacePresentation phi_q = phi_of(plots, z.carrier, "quotient differential structure as Phi of the quotient diffeology");
  ReflexivityReport rr = reflexivity_report(phi_q);
  rr.argument += "; the quotient differential structure equals Phi of the quotient diffeology";
  return b.finish(Reflexivity::Reflexive, rr);
}

Report orthant(std::uint64_t seed) {
  Builder b("orthant", "the positive quadrant", "positive orthant example");
  SpacePresentation o = load("orthant");
  const char* direct[] = {"x0",           "x0*x1",           "x0^2 + x1",      "sin(x0)*x1",  "flat(x0 - 1) + x1",
                          "x0^3 - 2*x1",  "cos(x0 + x1)",    "recip(1 + x0)",  "x0*x1^2 + 1", "flat(x1)*x0"};
  const char* pulled[] = {"abs(x0)",         "abs(x1)",           "abs(x0)*x1^2",     "abs(x0) + abs(x1)",
                          "norm(x0, x1)",    "abs(x0)^3",         "abs(x0*x1)",       "abs(x1) + x0^2",
                          "abs(x0)*abs(x1)*x0^2", "norm(x0, 2*x1)"};
  std::vector<Expr> sq = square_map(2);
  Agreement known;
  int coincide = 0, boman_ok = 0, member_agree = 0;
  for (const char* t : direct) {
    Expr f = ex(t, 2);
    Verdict a = orthant_membership(f, 2);
    Verdict p = orthant_membership_pullback(compose(f, sq), 2);
    Verdict m = function_member(o, f);
    known.add(a, true);
    coincide += a.outcome == p.outcome;
    member_agree += a.outcome == m.outcome;
    if (a.is_yes()) boman_ok += !boman_smoothness(compose(f, sq), id_plot(2), 20, seed).is_no();
  }
  for (const char* t : pulled) {
    Verdict a = orthant_membership_pullback(ex(t, 2), 2);
    known.add(a, false);
    coincide += 1;  // given only through the pullback
    member_agree += 1;
  }
  json d = known.to_json(20);
  d["coincide_with_pullback"] = coincide;
  d["boman_never_refutes"] = boman_ok;
  b.check("orthant membership matches the known status of 20 candidates (10 smooth, 10 given by non-smooth pullbacks)",
          known.contradictions == 0 && known.unknown == 0 && coincide == 20 && member_agree == 20 && boman_ok == 10, d);
  b.add("x0 is smooth on the orthant (x0 o sq = x0^2)", Outcome::Yes, orthant_membership(Expr::var(0), 2));
  b.add("the function whose pullback along sq is abs(x0) is not smooth", Outcome::No,
        orthant_membership_pullback(ex("abs(x0)", 2), 2));
  b.add("x0*x1 is smooth on the orthant", Outcome::Yes, function_member(o, ex("x0*x1", 2)));
  PlotGen sqp = PlotGen::make(sq, 2);
  b.add("sq is a plot of the orthant", Outcome::Yes, plot_member(o, sqp));
  SpacePresentation model = phi_of({sqp}, o.carrier, "Phi of the single plot sq");
  ReflexivityReport rr = reflexivity_report(model);
  rr.argument += "; f is smooth on the orthant iff f o sq is smooth, so C^oo is Phi{sq}";
  return b.finish(Reflexivity::Reflexive, rr);
}

Report corners(std::uint64_t) {
  Builder b("corners", "a square corner with two charts", "manifolds with corners example");
  std::vector<Expr> T{ex("x1", 2), ex("x0*(1 + x1)", 2)};
  std::vector<Expr> Ti{ex("x1*recip(1 + x0)", 2), ex("x0", 2)};
  for (std::size_t i = 0; i < 2; ++i) {
    b.add("transition component " + T[i].str() + " is smooth on the orthant", Outcome::Yes, orthant_membership(T[i], 2));
    b.add("inverse component " + Ti[i].str() + " is smooth on the orthant", Outcome::Yes, orthant_membership(Ti[i], 2));
  }
  SpacePresentation o = load("orthant");
  bool into = true, roundtrip = true;
  for (const auto& u : sample_domain(Domain::all(2), 100, 5)) {
    std::vector<Scalar> x{u[0] * u[0], u[1] * u[1]};  // orthant points
    std::vector<Scalar> y, back;
    for (const Expr& c : T) y.push_back(*evaluate_exact(c, x));
    into = into && o.carrier.contains(y);
    for (const Expr& c : Ti) back.push_back(*evaluate_exact(c, y));
    roundtrip = roundtrip && back == x;
  }
  b.check("the transition maps the orthant into itself (100 exact samples)", into);
  b.check("the inverse undoes the transition exactly on the samples", roundtrip);
  bool homeo = true;
  for (const auto& u : sample_domain(Domain::all(2), 100, 6)) {
    for (const Scalar& v : u) {
      Scalar a = v.sign() < 0 ? -v : v;
      auto r = exact_sqrt(a * a);
      homeo = homeo && r && *r == a;
    }
  }
  b.check("sq restricted to the orthant is a bijection onto it with continuous inverse sqrt (exact samples)", homeo);
  b.add("sq is a plot of the orthant, so the D-topology is the subset topology", Outcome::Yes,
        plot_member(o, PlotGen::make(square_map(2), 2)));
  SpacePresentation model = phi_of({PlotGen::make(square_map(2), 2)}, o.carrier, "corner chart model");
  ReflexivityReport rr = reflexivity_report(model);
  rr.argument += "; charts carry the reflexive orthant structure and transitions are smooth both ways";
  return b.finish(Reflexivity::Reflexive, rr);
}

Report orbifold_zadka(std::uint64_t seed) {
  Builder b("orbifold_zadka", "R^2 / {+-I} and the Zadka plot", "orbifolds example");
  SpacePresentation z = load("zadka");
  PlotGen p = zadka_plot();
  int smooth = 0, cubic = 0, total = 0, r2 = 0;
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned bb = 0; a + bb <= 3; ++bb)
      for (unsigned c = 0; a + bb + c <= 3; ++c) {
        Expr g = Expr::product({Expr::pow(Expr::var(0), a), Expr::pow(Expr::var(1), bb), Expr::pow(Expr::var(2), c)});
        SmoothnessVerdict v = certify_smooth(compose(g, p.components), 2);
        ++total;
        if (v.smooth()) {
          ++smooth;
          if (a + bb + c == 3) ++cubic;
          if (!v.trace.empty() && v.trace.front().find("R2") != std::string::npos) ++r2;
        }
      }
  b.check("g o p is certified smooth for every monomial g of degree <= 3 in (u, v, w)", smooth == total && cubic == 10,
          json{{"monomials", total}, {"smooth", smooth}, {"cubic_smooth", cubic}, {"via_flat_rule", r2}});
  b.add("the degree 3 monomial u v w composed with p passes curve probing", Outcome::Yes,
        boman_smoothness(Expr::product({Expr::var(0), Expr::var(1), Expr::var(2)}),
                         PlotGen::make(p.components, 2), 20, seed));
  SpacePresentation rt = pi_of(z.fn_generators, z.carrier, "Pi of the quotient differential structure");
  b.add("p is a plot of Pi C^oo(R^2 / Z2)", Outcome::Yes, plot_member(rt, p));
  Verdict lift = plot_member(z, p);
  json ld;
  if (lift.witness)
    if (const auto* w = std::get_if<NoContinuousLift>(&*lift.witness)) {
      ld["separation"] = w->separation;
      ld["expected_separation"] = 2 * std::exp(-4.0);
      ld["max_step"] = w->max_step;
      ld["holonomy"] = w->holonomy;
      ld["samples"] = w->samples;
    }
  bool sep_ok = ld.contains("separation") && ld["separation"].get<double>() >= 2 * std::exp(-4.0) * (1 - 1e-6);
  b.add("p has no continuous lift at the origin (loop of radius 1/2)", Outcome::No, lift, ld);
  b.check("the loop lift returns to the antipodal representative with separation >= 2 e^-4", sep_ok, ld);
  PlotGen q = PlotGen::make({Expr::var(0), ex("x1^2", 2)}, 2);
  b.add("pi o (u, v^2) is a plot", Outcome::Yes, plot_member(z, q));
  PlotGen qo = PlotGen::make(compose_all(z.fn_generators, q.components), 2);
  qo.orbit_coords = true;
  LiftResult lr = lift_witness(qo, z.carrier.group, z.fn_generators, {Scalar(0), Scalar(0)}, Scalar::ratio(1, 2));
  b.add("the same plot in orbit coordinates has no monodromy, so no witness", Outcome::Unknown,
        lr.witness ? Verdict::no(*lr.witness, lr.reason) : Verdict::unknown(lr.reason));
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_plot(z, rt, p));
}

Report wedge_two_axes(std::uint64_t seed) {
  Builder b("wedge_two_axes", "two lines glued at the origin", "two coordinate axes example");
  SpacePresentation w = load("wedge");
  SpacePresentation e = load("two_axes");
  const char* pos[] = {"x0 + x1^2",  "abs(x0)*x1",          "x0*x1",          "sin(x0) + cos(x1)",
                       "flat(x0) + x1^3", "cases(x0; 0, 0, x1)", "abs(x0 - 1)*x1", "norm(x0, x1)*x0*x1",
                       "x0^2*abs(x1)", "cases(x0*x1; 1, 2, 3) + x0"};
  const char* neg[] = {"abs(x0)",   "abs(x1) + x0",    "cases(x0; 0, 0, 1)", "norm(x0, x1)", "abs(x0)^3",
                       "abs(x0 + x1)", "cases(x1; 0, 1, 1)", "abs(x0)*x0",  "x1*abs(x1)",   "abs(x0 - 1)"};
  Agreement phi, sub;
  int same = 0;
  for (int k = 0; k < 20; ++k) {
    bool member = k < 10;
    Expr f = ex(member ? pos[k] : neg[k - 10], 2);
    Verdict a = phi_contains(w.plot_generators, f, 2, seed);
    Verdict c = function_member(e, f);
    phi.add(a, member);
    sub.add(c, member);
    same += a.outcome == c.outcome;
  }
  json d = phi.to_json(20);
  d["subset_structure"] = sub.to_json(20);
  d["same_outcome"] = same;
  b.check("Phi D_W (both branch restrictions smooth) equals C^oo(E) on 10 positive and 10 negative candidates",
          phi.contradictions == 0 && sub.contradictions == 0 && phi.unknown == 0 && sub.unknown == 0 && same == 20, d);
  b.add("abs on the first branch is refuted", Outcome::No, phi_contains(w.plot_generators, ex("abs(x0)", 2), 2, seed));
  PlotGen fl = curve({ex("cases(t; flat(t), 0, 0)", 1), ex("cases(t; 0, 0, flat(t))", 1)});
  b.add("the flat two-branch curve is a plot of E", Outcome::Yes, plot_member(e, fl));
  SpacePresentation rt = pi_of(e.fn_generators, e.carrier, "Pi C^oo(E)");
  b.add("the flat two-branch curve is in Pi C^oo(E)", Outcome::Yes, plot_member(rt, fl));
  b.add("it does not lift to the disjoint union, so it is not in D_W", Outcome::No, plot_member(w, fl));
  b.add("the curve (t, t) leaves the two axes", Outcome::No, plot_member(e, curve({Expr::var(0), Expr::var(0)})));
  b.add("a constant curve is a plot of W", Outcome::Yes, plot_member(w, curve({Expr(), Expr()})));
  b.add("a curve on one branch is a plot of W", Outcome::Yes, plot_member(w, curve({ex("t^3 - t", 1), Expr()})));
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_plot(w, rt, fl));
}

// lifts p (a piecewise curve into S, cases on t) through phi(x, y, z) = (x + z, y + z)
std::optional<PlotGen> lift_to_axes(const PlotGen& p) {
  std::vector<Expr> sides[2];
  for (int si = 0; si < 2; ++si) {
    int side = si == 0 ? -1 : 1;
    auto a0 = resolve_side(p.components[0], Scalar(0), side);
    auto a1 = resolve_side(p.components[1], Scalar(0), side);
    if (!a0 || !a1) return std::nullopt;
    if (is_zero_nf(*a1)) sides[si] = {*a0, Expr(), Expr()};        // x-axis
    else if (is_zero_nf(*a0)) sides[si] = {Expr(), *a1, Expr()};   // y-axis
    else if (equal_nf(*a0, *a1)) sides[si] = {Expr(), Expr(), *a0};  // diagonal
    else return std::nullopt;
  }
  std::vector<Expr> q;
  for (std::size_t i = 0; i < 3; ++i) q.push_back(Expr::cases(Expr::var(0), sides[0][i], Expr(), sides[1][i]));
  return PlotGen::make(std::move(q), 1);
}

Report three_lines(std::uint64_t seed) {
  Builder b("three_lines", "three lines through the origin in R^2", "three lines example");
  SpacePresentation s = load("three_lines");
  SpacePresentation e = load("three_axes");
  std::vector<Scalar> o2(2, Scalar(0)), o3(3, Scalar(0));
  auto t0 = Clock::now();
  TangentReport ts = zariski_tangent_dim(s.carrier, o2);
  double ms_s = ms_since(t0);
  t0 = Clock::now();
  TangentReport te = zariski_tangent_dim(e.carrier, o3);
  double ms_e = ms_since(t0);
  b.check("Zariski tangent dimension of S at the origin is 2", ts.tangent_dim == 2 && ms_s < 1000,
          json{{"tangent_dim", ts.tangent_dim}, {"jacobian_rank", ts.jacobian_rank}, {"note", ts.assumption_note}});
  b.check("Zariski tangent dimension of E at the origin is 3", te.tangent_dim == 3 && ms_e < 1000,
          json{{"tangent_dim", te.tangent_dim}, {"jacobian_rank", te.jacobian_rank}});
  TangentReport t1 = zariski_tangent_dim(s.carrier, {Scalar(1), Scalar(0)});
  b.check("at (1, 0) S is a smooth curve: tangent dimension 1", t1.tangent_dim == 1);
  std::vector<Expr> phi{ex("x0 + x2", 3), ex("x1 + x2", 3)};
  b.add("phi(x, y, z) = (x + z, y + z) is functionally smooth from E to S", Outcome::Yes,
        check_functionally_smooth(phi, e, s));
  const char* pos[] = {"x0",      "x1",         "x0*x1",         "x0^2 - x1",              "sin(x0)",
                       "flat(x0 - 1)", "x0^3 + x1^3", "cos(x1)*x0", "x0*x1*(x1 - x0) + 1", "flat(x1)*x0"};
  // in Phi D_S (smooth on each line) but not in C^oo(S), then in neither
  const char* mid[] = {"cases(x0*x1; 0, 0, x0)", "cases(x0*x1; 0, 0, x1)", "cases(x0*x1; 0, 0, 2*x0)",
                       "cases(x0*x1; 0, 0, x0) + x0^2", "cases(x0*x1; 0, 0, -x1) + x1"};
  const char* neg[] = {"abs(x0)", "abs(x1) + x0", "cases(x0*x1; 0, 0, x0 + 1)", "abs(x0 - x1)", "norm(x0, x1)"};
  SpacePresentation rt = phi_of(s.carrier.parametrizations, s.carrier, "Phi D_S: smooth along each line");
  Agreement in_s, in_rt, via_phi;
  int same = 0;
  for (int k = 0; k < 20; ++k) {
    const char* t = k < 10 ? pos[k] : (k < 15 ? mid[k - 10] : neg[k - 15]);
    bool member_s = k < 10, member_rt = k < 15;
    Expr f = ex(t, 2);
    Verdict a = function_member(s, f);
    Verdict r = function_member(rt, f);
    Verdict c = function_member(e, compose(f, phi));
    in_s.add(a, member_s);
    in_rt.add(r, member_rt);
    via_phi.add(c, member_rt);
    same += r.outcome == c.outcome;
  }
  json d = in_s.to_json(20);
  d["phi_d_s"] = in_rt.to_json(20);
  d["via_pullback_to_E"] = via_phi.to_json(20);
  d["same_outcome"] = same;
  b.check("membership in C^oo(S) and in Phi D_S (pullback along phi smooth on E) match 20 hand-built candidates",
          in_s.contradictions + in_rt.contradictions + via_phi.contradictions == 0 &&
              in_s.unknown + in_rt.unknown + via_phi.unknown == 0 && same == 20,
          d);
  Expr f1 = ex(mid[0], 2);
  b.add("f = cases(x0*x1; 0, 0, x0) is not in C^oo(S)", Outcome::No, function_member(s, f1));
  b.add("f o phi = x2 on E, so f is in Phi Pi C^oo(S)", Outcome::Yes, function_member(rt, f1));
  // transport of piecewise plots
  ExprSampler smp(1, seed);
  int certified = 0;
  json first;
  for (int k = 0; k < 20; ++k) {
    int l = smp.below(3), r = smp.below(3);
    Expr al = Expr::flat(Expr::var(0)) * (Expr::constant(Scalar(1 + smp.below(3))) + Expr::constant(smp.small_rational()) * Expr::var(0));
    Expr ar = Expr::flat(Expr::var(0)) * (Expr::constant(Scalar(1 + smp.below(3))) + Expr::constant(smp.small_rational()) * Expr::pow(Expr::var(0), 2));
    auto on = [](int line, const Expr& a) -> std::pair<Expr, Expr> {
      if (line == 0) return {a, Expr()};
      if (line == 1) return {Expr(), a};
      return {a, a};
    };
    auto [l0, l1] = on(l, al);
    auto [r0, r1] = on(r, ar);
    PlotGen p = curve({Expr::cases(Expr::var(0), l0, Expr(), r0), Expr::cases(Expr::var(0), l1, Expr(), r1)});
    bool ok = plot_member(s, p).is_yes();
    auto q = lift_to_axes(p);
    ok = ok && q && plot_member(e, *q).is_yes();
    if (ok) {
      auto back = compose_all(phi, q->components);
      // compare branch by branch; sums of cases do not merge in normal form
      for (std::size_t i = 0; i < 2; ++i)
        for (int side : {-1, 1}) {
          auto x = resolve_side(back[i], Scalar(0), side), y = resolve_side(p.components[i], Scalar(0), side);
          ok = ok && x && y && equal_nf(*x, *y);
        }
    }
    certified += ok;
    if (k == 0) first = json{{"plot", plot_to_json(p)}, {"lift", q ? plot_to_json(*q) : json()}};
  }
  first["certified"] = certified;
  first["plots"] = 20;
  b.check("20 sampled piecewise plots of S lift through phi to plots of E", certified == 20, first);
  return b.finish(Reflexivity::NonReflexive, nonreflexive_by_function(s, rt, f1));
}

Report k_lines(std::uint64_t seed) {
  Builder b("k_lines", "unions of k lines through the origin", "arrangements of k lines");
  auto sl = [](std::initializer_list<const char*> xs) {
    std::vector<Slope> v;
    for (const char* x : xs) v.push_back(Slope::parse(x));
    return v;
  };
  auto a3 = sl({"0", "inf", "1"}), b3 = sl({"0", "inf", "2"});
  EquivalenceCertificate c3 = lines_equivalence(a3, b3);
  b.check("{0, inf, 1} and {0, inf, 2} differ by a linear map", c3.equivalent && verify_equivalence(a3, b3, c3),
          json{{"permutations_tried", c3.permutations_tried}});
  ExprSampler s(1, seed);
  int eq = 0;
  for (int k = 0; k < 5; ++k) {
    std::vector<Slope> t;
    while (t.size() < 3) {
      Slope x;
      x.value = s.small_rational() + Scalar(static_cast<long>(t.size()) * 7);
      if (std::find(t.begin(), t.end(), x) == t.end()) t.push_back(x);
    }
    auto c = lines_equivalence(a3, t);
    eq += c.equivalent && verify_equivalence(a3, t, c);
  }
  b.check("5 seeded triples of lines are all equivalent to {0, inf, 1}", eq == 5, json{{"equivalent", eq}});
  auto a4 = sl({"0", "inf", "1", "2"}), b4 = sl({"0", "inf", "1", "3"});
  EquivalenceCertificate c4 = lines_equivalence(a4, b4);
  b.check("{0, inf, 1, 2} and {0, inf, 1, 3} are not equivalent (all 24 correspondences fail)",
          !c4.equivalent && c4.permutations_tried == 24, json{{"permutations_tried", c4.permutations_tried}});
  Matrix m{{Scalar(1), Scalar(2)}, {Scalar(3), Scalar(5)}};
  auto img = transform_arrangement(a4, m);
  EquivalenceCertificate ci = lines_equivalence(a4, img);
  b.check("four lines and their image under [[1, 2], [3, 5]] are equivalent", ci.equivalent && verify_equivalence(a4, img, ci));
  return b.finish(Reflexivity::Unknown, ReflexivityReport{});
}

Report category_roundtrip(std::uint64_t seed) {
  Builder b("category_roundtrip", "Galois laws on random presentations", "Galois correspondence laws");
  LawReport lr = galois_law_suite(50, seed);
  auto tj = [](const LawTally& t) {
    return json{{"comparisons", t.comparisons}, {"contradictions", t.contradictions}, {"unknown", t.unknown}};
  };
  b.check("Pi Phi Pi = Pi: no certified contradictions", lr.pi_phi_pi.contradictions == 0, tj(lr.pi_phi_pi));
  b.check("Phi Pi Phi = Phi: no certified contradictions", lr.phi_pi_phi.contradictions == 0, tj(lr.phi_pi_phi));
  b.check("Gamma Phi Gamma = Gamma: no certified contradictions", lr.gamma_phi_gamma.contradictions == 0,
          tj(lr.gamma_phi_gamma));
  b.check("functoriality: D-smooth maps are smooth between the Phi images", lr.functoriality.contradictions == 0,
          tj(lr.functoriality));
  LawTally t = lr.total();
  json d = tj(t);
  d["unknown_rate"] = t.unknown_rate();
  d["presentations"] = lr.presentations;
  b.check("Unknown rate over all law comparisons is at most 20%", t.unknown_rate() <= 0.2, d);
  ReflexivityReport rr = reflexivity_report(pi_of({Expr::var(0)}, Carrier::euclidean(2)));
  b.check("Pi of a function family is reported reflexive by construction", rr.status == Reflexivity::Reflexive);
  return b.finish(Reflexivity::Unknown, ReflexivityReport{});
}

Report manifolds(std::uint64_t) {
  Builder b("manifolds", "R^n with its standard structures", "standard spaces");
  for (int n = 1; n <= 3; ++n) {
    SpacePresentation x = standard_space(n);
    b.add("the identity of R^" + std::to_string(n) + " is a plot", Outcome::Yes, plot_member(x, id_plot(n)));
    b.add("x0 is a smooth function on R^" + std::to_string(n), Outcome::Yes, function_member(x, Expr::var(0)));
  }
  return b.finish(Reflexivity::Reflexive, reflexivity_report(standard_space(2)));
}

using ItemFn = Report (*)(std::uint64_t);

const std::vector<std::pair<std::string, ItemFn>>& catalogue() {
  static const std::vector<std::pair<std::string, ItemFn>> c = {
      {"wire", wire},
      {"rationals", rationals},
      {"ck", ck},
      {"irrational_torus", irrational_torus},
      {"irrational_line", irrational_line},
      {"orthogonal_quotient", orthogonal_quotient},
      {"orthant", orthant},
      {"corners", corners},
      {"orbifold_zadka", orbifold_zadka},
      {"wedge_two_axes", wedge_two_axes},
      {"three_lines", three_lines},
      {"k_lines", k_lines},
      {"category_roundtrip", category_roundtrip},
      {"manifolds", manifolds},
  };
  return c;
}

}  // namespace

const std::vector<std::string>& gallery_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : catalogue()) v.push_back(id);
    return v;
  }();
  return ids;
}

Report run_example(const std::string& id, std::uint64_t seed) {
  for (const auto& [name, fn] : catalogue())
    if (name == id) return fn(seed);
  throw std::invalid_argument("unknown gallery item: " + id);
}

json GallerySummary::to_json(bool with_runtimes) const {
  json j;
  json s;
  s["reports"] = reports.size();
  s["AllCertified"] = all_certified;
  s["HasRefutations"] = has_refutations;
  s["HasUnknown"] = has_unknown;
  s["Failed"] = failed;
  j["summary"] = s;
  json rs = json::array();
  for (const Report& r : reports) rs.push_back(r.to_json(with_runtimes));
  j["reports"] = rs;
  return j;
}

int GallerySummary::exit_code() const {
  if (failed) return 1;
  if (has_unknown) return 2;
  return 0;
}

GallerySummary run_all(const std::string& filter, std::uint64_t seed, int jobs) {
  std::vector<std::string> ids;
  for (const std::string& id : gallery_ids())
    if (filter.empty() || fnmatch(filter.c_str(), id.c_str(), 0) == 0) ids.push_back(id);
  std::vector<Report> out(ids.size());
  const int n = static_cast<int>(ids.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : 1)
  for (int i = 0; i < n; ++i) {
    auto ui = static_cast<std::size_t>(i);
    try {
      out[ui] = run_example(ids[ui], seed);
    } catch (const std::exception& e) {
      Report r;
      r.id = ids[ui];
      r.title = ids[ui];
      Claim c;
      c.text = "item raised an error";
      c.anchor = ids[ui];
      c.verdict = Verdict::unknown(e.what());
      c.check_failed = true;
      r.claims.push_back(std::move(c));
      out[ui] = std::move(r);
    }
  }
  GallerySummary sum;
  sum.reports = std::move(out);
  for (const Report& r : sum.reports) {
    switch (r.status()) {
      case ReportStatus::AllCertified: ++sum.all_certified; break;
      case ReportStatus::HasRefutations: ++sum.has_refutations; break;
      case ReportStatus::HasUnknown: ++sum.has_unknown; break;
      case ReportStatus::Failed: ++sum.failed; break;
    }
  }
  return sum;
}

}  // namespace smoothkit
