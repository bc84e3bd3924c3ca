// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "smoothkit/constructions.hpp"
#include "smoothkit/gallery.hpp"
#include "smoothkit/invariants.hpp"
#include "smoothkit/invring.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/sampler.hpp"

using namespace smoothkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

SpacePresentation gallery(const std::string& name) { return load_presentation_file(data_path("gallery/" + name + ".json")); }

std::set<std::string> nf_set(const std::vector<Expr>& es) {
  std::set<std::string> out;
  for (const Expr& e : es) out.insert(normal_form(e).str());
  return out;
}

const Claim* claim(const Report& r, const std::string& prefix) {
  for (const Claim& c : r.claims)
    if (c.text.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

bool claim_ok(const Report& r, const std::string& prefix) {
  const Claim* c = claim(r, prefix);
  return c && !c->failed() && !c->unexpected_unknown();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Gate {
  int failures = 0;
  void run(int n, const std::string& name, const std::function<bool(std::string&)>& f) {
    std::string detail;
    bool ok = false;
    try {
      ok = f(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    failures += !ok;
    std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", n, name.c_str(), detail.empty() ? "" : " : ", detail.c_str());
    std::fflush(stdout);
  }
};

bool zariski(std::string& d) {
  auto t = Clock::now();
  TangentReport s = zariski_tangent_dim(gallery("three_lines").carrier, {Scalar(0), Scalar(0)});
  double ts = seconds_since(t);
  t = Clock::now();
  TangentReport e = zariski_tangent_dim(gallery("three_axes").carrier, {Scalar(0), Scalar(0), Scalar(0)});
  double te = seconds_since(t);
  d = "S " + std::to_string(s.tangent_dim) + ", E " + std::to_string(e.tangent_dim);
  return s.tangent_dim == 2 && e.tangent_dim == 3 && ts < 1 && te < 1;
}

bool invariant_rings(std::string& d) {
  auto t = Clock::now();
  auto xy = [](int n, const char* s) { return parse_expr(s, n); };
  bool ok = nf_set(invariant_generators(FiniteMatrixGroup::plus_minus(2), 2)) ==
            nf_set({xy(2, "x0^2"), xy(2, "x0*x1"), xy(2, "x1^2")});
  for (int n = 1; n <= 4; ++n) {
    std::vector<Expr> want;
    for (int i = 0; i < n; ++i) want.push_back(Expr::pow(Expr::var(i), 2));
    ok = ok && nf_set(invariant_generators(FiniteMatrixGroup::sign_flips(n), 2)) == nf_set(want);
  }
  double s = seconds_since(t);
  d = std::to_string(s) + " s";
  return ok && s < 10;
}

bool cone(std::string& d) {
  HilbertMap h = hilbert_map(FiniteMatrixGroup::plus_minus(2), 2);
  ConeReport r = cone_image_check(h, standard_cone_change(), 1000, 42);
  d = std::to_string(r.nonnegative) + "/" + std::to_string(r.samples) + " nonnegative";
  return r.identity_holds && r.samples == 1000 && r.nonnegative == 1000 && r.passed();
}

bool wire(std::string& d) {
  Report r = run_example("wire", 42);
  Verdict id = plot_member(gallery("wire"), PlotGen::make({Expr::var(0), Expr::var(1)}, 2));
  bool rank = id.is_no() && id.witness && witness_kind(*id.witness) == "RankObstruction" && recheck_witness(*id.witness);
  const Claim* p = claim(r, "100 probe curves");
  bool probes = p && p->data["contradictions"] == 0 && p->data["unknown"].get<int>() * 10 <= p->data["candidates"].get<int>() &&
                p->data["probes_per_candidate"] == 100;
  d = p ? p->data.dump() : "no probe claim";
  return rank && probes && r.reflexivity.status == Reflexivity::NonReflexive && r.status() != ReportStatus::Failed;
}

bool rationals(std::string& d) {
  SpacePresentation q = gallery("rationals");
  bool incl = function_member(q, Expr::var(0)).is_yes();
  ExprSampler s(1, 42);
  int refuted = 0;
  for (int i = 0; i < 20; ++i) {
    Expr c;
    do c = s.polynomial(3, 3);
    while (to_poly(c).is_constant());
    Verdict v = plot_member(q, PlotGen::make({c}, 1));
    refuted += v.is_no() && witness_kind(*v.witness) == "NotLocallyConstant" && recheck_witness(*v.witness);
  }
  Report r = run_example("rationals", 42);
  d = std::to_string(refuted) + "/20 refuted";
  return incl && refuted == 20 && r.reflexivity.status == Reflexivity::NonReflexive && r.status() != ReportStatus::Failed;
}

bool ck(std::string& d) {
  // independent of the gallery: the witness composition |p - c|(p - c)^k is
  // probed at order k + 1 where p' != 0
  SpacePresentation base = gallery("ck2");
  bool ok = true;
  double worst = INFINITY;
  ExprSampler s(1, 42);
  for (int k = 1; k <= 3; ++k) {
    SpacePresentation x = base;
    x.construction = "ck:" + std::to_string(k);
    for (int i = 0; i < 10; ++i) {
      Expr c = i == 0 ? Expr::var(0) : s.polynomial(3, 3);
      if (to_poly(c).is_constant()) continue;
      Verdict v = plot_member(x, PlotGen::make({c}, 1));
      const auto* w = v.witness ? std::get_if<CompositionNotSmooth>(&*v.witness) : nullptr;
      if (!w || !w->verdict.divergence || w->verdict.divergence->order != k + 1) {
        ok = false;
        continue;
      }
      DivergenceRecord again = probe_order(w->composite, w->verdict.divergence->point, w->verdict.divergence->direction, k + 1);
      worst = std::min(worst, again.growth());
      ok = ok && again.divergent && again.growth() >= 10 && recheck_witness(*v.witness);
    }
  }
  Report r = run_example("ck", 42);
  d = "min growth " + std::to_string(worst);
  return ok && r.reflexivity.status == Reflexivity::NonReflexive && r.status() != ReportStatus::Failed;
}

bool torus(std::string& d) {
  bool dims = true;
  for (int n = 1; n <= 10; ++n) dims = dims && torus_invariants(Scalar::sqrt2(), n).dimension == 1;
  bool lattice = !in_integer_lattice(Scalar::ratio(1, 2), Scalar::sqrt2());
  PlotGen g = PlotGen::make({Expr(), parse_expr("cases(t; 0, 1/2, 1/2)", 1)}, 1);
  Verdict v = plot_member(gallery("torus"), g);
  bool step = v.is_no() && witness_kind(*v.witness) == "TopologyObstruction" && recheck_witness(*v.witness);
  Report r = run_example("irrational_torus", 42);
  d = std::string(dims ? "dims 1" : "dims wrong") + (step ? ", step refuted" : ", step not refuted");
  return dims && lattice && step && r.reflexivity.status == Reflexivity::NonReflexive && r.status() != ReportStatus::Failed;
}

bool orbifold(std::string& d) {
  PlotGen p = zadka_plot();
  int smooth = 0, total = 0;
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned b = 0; a + b <= 3; ++b)
      for (unsigned c = 0; a + b + c <= 3; ++c) {
        Expr g = Expr::product({Expr::pow(Expr::var(0), a), Expr::pow(Expr::var(1), b), Expr::pow(Expr::var(2), c)});
        ++total;
        smooth += certify_smooth(compose(g, p.components), 2).smooth();
      }
  std::vector<Expr> inv{parse_expr("x0^2", 2), parse_expr("x0*x1", 2), parse_expr("x1^2", 2)};
  LiftResult l = lift_witness(p, FiniteMatrixGroup::plus_minus(2), inv, {Scalar(0), Scalar(0)}, Scalar::ratio(1, 2));
  bool lift = l.witness && l.witness->holonomy % 2 == 1 && l.witness->separation >= 2 * std::exp(-4.0) * (1 - 1e-9) &&
              recheck_lift(*l.witness);
  Report r = run_example("orbifold_zadka", 42);
  d = std::to_string(smooth) + "/" + std::to_string(total) + " monomials smooth, separation " +
      (l.witness ? std::to_string(l.witness->separation) : "none");
  return smooth == total && lift && r.reflexivity.status == Reflexivity::NonReflexive && r.status() != ReportStatus::Failed;
}

bool wedge_three_lines(std::string& d) {
  Report w = run_example("wedge_two_axes", 42);
  Report s = run_example("three_lines", 42);
  bool wc = claim_ok(w, "Phi D_W (both branch restrictions smooth)");
  bool sc = claim_ok(s, "membership in C^oo(S)");
  const Claim* tr = claim(s, "20 sampled piecewise plots");
  bool transport = tr && !tr->failed() && tr->data["certified"] == 20;
  d = std::string("wedge ") + (wc ? "ok" : "bad") + ", lines " + (sc ? "ok" : "bad") + ", transport " +
      (tr ? tr->data["certified"].dump() : "?") + "/20";
  return wc && sc && transport && w.reflexivity.status == Reflexivity::NonReflexive &&
         s.reflexivity.status == Reflexivity::NonReflexive && w.status() != ReportStatus::Failed &&
         s.status() != ReportStatus::Failed;
}

bool laws(std::string& d) {
  LawReport r = galois_law_suite(50, 42);
  LawTally t = r.total();
  d = std::to_string(t.comparisons) + " comparisons, " + std::to_string(t.contradictions) + " contradictions, unknown rate " +
      std::to_string(t.unknown_rate());
  return r.presentations == 50 && r.pi_phi_pi.contradictions == 0 && r.phi_pi_phi.contradictions == 0 &&
         r.gamma_phi_gamma.contradictions == 0 && r.functoriality.contradictions == 0 && t.unknown_rate() <= 0.2 &&
         r.pi_phi_pi.comparisons > 0 && r.phi_pi_phi.comparisons > 0 && r.gamma_phi_gamma.comparisons > 0 &&
         r.functoriality.comparisons > 0;
}

bool boman(std::string& d) {
  // 15 smooth by construction, 15 with |linear form| in them
  ExprSampler s(2, 42);
  PlotGen id = PlotGen::make({Expr::var(0), Expr::var(1)}, 2);
  int contradictions = 0, decided = 0;
  for (int i = 0; i < 30; ++i) {
    bool smooth = i < 15;
    Expr f = smooth ? s.r1(2)
                    : Expr::abs(Expr::constant(Scalar(1 + s.below(3))) * Expr::var(i % 2) +
                                Expr::constant(s.small_rational()) * Expr::var(1 - i % 2)) +
                          s.polynomial(2, 2);
    Verdict probe = boman_smoothness(f, id, 30, 42 + static_cast<std::uint64_t>(i));
    SmoothnessVerdict direct = certify_smooth(f, 2);
    if ((direct.smooth() && probe.is_no()) || (direct.not_ck() && probe.is_yes())) ++contradictions;
    if ((smooth && probe.is_no()) || (!smooth && probe.is_yes())) ++contradictions;
    decided += !probe.is_unknown();
  }
  d = std::to_string(contradictions) + " contradictions, " + std::to_string(decided) + "/30 decided";
  return contradictions == 0;
}

bool full_gallery(std::string& d) {
  const std::string cli = SMOOTHKIT_CLI;
  const std::string a = "acceptance_run_a", b = "acceptance_run_b";
  auto t = Clock::now();
  int rc1 = std::system((cli + " gallery run --seed 42 --json " + a + ".json > " + a + ".txt").c_str());
  double s1 = seconds_since(t);
  int rc2 = std::system((cli + " gallery run --seed 42 --json " + b + ".json > " + b + ".txt").c_str());
  bool same = slurp(a + ".json") == slurp(b + ".json") && slurp(a + ".txt") == slurp(b + ".txt") &&
              !slurp(a + ".json").empty();
  json j = json::parse(slurp(a + ".json"));
  int failed = j["summary"]["Failed"].get<int>();
  d = std::to_string(s1) + " s, Failed " + std::to_string(failed) + (same ? ", byte-identical" : ", outputs differ");
  return rc1 == 0 && rc2 == 0 && s1 < 120 && failed == 0 && same;
}

}  // namespace

int main() {
  Gate g;
  g.run(1, "Zariski tangent dimensions 2 and 3", zariski);
  g.run(2, "invariant ring generators", invariant_rings);
  g.run(3, "cone image identity", cone);
  g.run(4, "wire diffeology", wire);
  g.run(5, "rationals", rationals);
  g.run(6, "C^k divergence growth", ck);
  g.run(7, "irrational torus", torus);
  g.run(8, "orbifold lift", orbifold);
  g.run(9, "wedge and three lines", wedge_three_lines);
  g.run(10, "Galois law suites", laws);
  g.run(11, "curve-probe agreement", boman);
  g.run(12, "full gallery run", full_gallery);
  std::printf("%d of 12 criteria failed\n", g.failures);
  return g.failures ? 1 : 0;
}
