#include "smoothkit/galois.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "smoothkit/constructions.hpp"
#include "smoothkit/invring.hpp"
#include "smoothkit/jets.hpp"
#include "smoothkit/normal_form.hpp"
#include "smoothkit/sampler.hpp"

namespace smoothkit {

namespace {

std::vector<Expr> coordinates(int n) {
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(Expr::var(i));
  return c;
}

PlotGen identity_plot(int n) { return PlotGen::make(coordinates(n), n); }

bool is_constant_expr(const Expr& e) { return to_poly(e).is_constant(); }

bool is_constant_plot(const PlotGen& p) {
  if (p.all_smooth_curves) return false;
  return std::all_of(p.components.begin(), p.components.end(), is_constant_expr);
}

std::string first_line(const SmoothnessVerdict& v) {
  return v.trace.empty() ? "certified smooth" : v.trace.front();
}

int gens_dim(const std::vector<Expr>& gens) {
  int n = 1;
  for (const Expr& e : gens) n = std::max(n, e.min_dim());
  return n;
}

// f o p with orbit coordinates resolved against the generators `gens`
std::optional<Expr> composite(const Expr& f, const PlotGen& p, const std::vector<Expr>* gens) {
  if (!p.orbit_coords) return compose(f, p.components);
  if (!gens) return std::nullopt;
  auto g = express_in_generators(f, *gens, std::max(gens_dim(*gens), f.min_dim()));
  if (!g) return std::nullopt;
  return compose(*g, p.components);
}

std::optional<SmoothnessVerdict> smooth_univariate(const Expr& h);

SmoothnessVerdict certify_on(const Expr& c, const PlotGen& p) {
  SmoothnessVerdict v = certify_smooth(c, p.domain.box());
  if (v.status == SmoothStatus::Unknown && p.dims() == 1 && c.min_dim() <= 1)
    if (auto u = smooth_univariate(c)) return *u;
  return v;
}

// certify f o p for each f; the list-level verdict
Verdict compose_all_smooth(const std::vector<Expr>& fs, const PlotGen& p,
                           const std::vector<Expr>* gens, const std::string& family_note) {
  std::vector<std::string> cert;
  std::string unknown;
  for (const Expr& f : fs) {
    auto c = composite(f, p, gens);
    if (!c) {
      unknown = "could not write " + f.str() + " in the orbit coordinates";
      continue;
    }
    SmoothnessVerdict v = certify_on(*c, p);
    if (v.smooth()) {
      cert.push_back(f.str() + " o p: " + first_line(v));
    } else if (v.not_ck()) {
      CompositionNotSmooth w{f, p, *c, v, family_note};
      return Verdict::no(std::move(w), f.str() + " o p is not smooth");
    } else if (unknown.empty()) {
      unknown = f.str() + " o p: " + v.reason;
    }
  }
  if (!unknown.empty()) return Verdict::unknown(unknown);
  if (cert.empty()) cert.push_back("no generators to test");
  return Verdict::yes(std::move(cert));
}

// carrier constraints on the image of p
std::optional<Verdict> carrier_constraints(const PlotGen& p, const Carrier& c) {
  if (c.kind != CarrierKind::Subset || p.all_smooth_curves) return std::nullopt;
  if (c.rational_points) {
    ConstancyRecord r = locally_constant_check(p, c);
    if (r.status == ConstancyStatus::NotLocallyConstant)
      return Verdict::no(NotLocallyConstant{p, c, r}, r.reason);
    if (r.status != ConstancyStatus::ConfirmedLocallyConstant)
      return Verdict::unknown("local constancy undecided: " + r.reason);
    return std::nullopt;
  }
  bool exact_eqs = true;
  for (const Expr& e : c.equations)
    if (!is_zero_nf(compose(e, p.components))) exact_eqs = false;
  if (exact_eqs && c.inequalities.empty()) return std::nullopt;
  for (const auto& u : sample_domain(p.domain, 100, 7)) {
    std::vector<Scalar> y;
    bool exact = true;
    for (const Expr& comp : p.components) {
      std::optional<Scalar> v;
      try {
        v = evaluate_exact(comp, u);
      } catch (const EvalError&) {
        return Verdict::unknown("plot undefined at a sample point");
      }
      if (!v) {
        exact = false;
        break;
      }
      y.push_back(*v);
    }
    if (exact) {
      if (!c.contains(y)) return Verdict::no(OutsideCarrier{p, c, u}, "image leaves the subset");
    } else {
      std::vector<double> yd;
      auto ud = to_doubles(u);
      for (const Expr& comp : p.components) yd.push_back(evaluate(comp, ud));
      if (!c.contains_approx(yd, 1e-9)) return Verdict::unknown("image appears to leave the subset (numeric)");
    }
  }
  return std::nullopt;
}

Verdict standard_function(const Expr& f, int n) {
  SmoothnessVerdict v = certify_smooth(f, n);
  if (v.smooth()) return Verdict::yes({first_line(v)});
  if (v.not_ck())
    return Verdict::no(CompositionNotSmooth{f, identity_plot(std::max(n, f.min_dim())), f, v, ""},
                       "not smooth: " + v.reason);
  return Verdict::unknown(v.reason);
}

bool contains_all_coordinates(const std::vector<Expr>& gens, int n) {
  for (int i = 0; i < n; ++i) {
    Expr xi = Expr::var(i);
    if (std::none_of(gens.begin(), gens.end(), [&](const Expr& g) { return equal_nf(g, xi); }))
      return false;
  }
  return true;
}

// Smooth curves through the guard loci of f; each checked as a plot of Pi F0
// and then composed with f.
std::optional<Verdict> refute_by_lines(const std::vector<Expr>& f0, const Carrier& carrier,
                                       const Expr& f, int n) {
  Box box = Box::all(n);
  for (const LocusPoint& lp : guard_locus_points(f, box)) {
    PlotGen line = line_plot(lp.point, lp.direction);
    Verdict in = pi_contains(f0, line, carrier);
    if (!in.is_yes()) continue;
    Expr c = compose(f, line.components);
    SmoothnessVerdict v = certify_smooth(c, 1);
    if (v.not_ck())
      return Verdict::no(CompositionNotSmooth{f, line, c, v, "the line is a plot of Pi F0"},
                         "f fails along a line that every generator sees as smooth");
  }
  return std::nullopt;
}

// differential structure generated by F0
Verdict generated_function(const std::vector<Expr>& f0, const Carrier& carrier, const Expr& f, int n) {
  if (is_constant_expr(f)) return Verdict::yes({"constant"});
  for (const Expr& g : f0)
    if (equal_nf(g, f)) return Verdict::yes({"a generator"});
  if (auto g = express_in_generators(f, f0, n))
    return Verdict::yes({"f = " + g->str() + " in the generators y_i"});
  if (contains_all_coordinates(f0, n)) {
    Verdict v = standard_function(f, n);
    if (!v.is_unknown()) return v;
  }
  if (auto r = refute_by_lines(f0, carrier, f, n)) return *r;
  return Verdict::unknown("f is not a polynomial in the generators and no refuting plot was found");
}

// ---- ck:K

int ck_order(const std::string& construction) { return std::stoi(construction.substr(3)); }

// guards are affine polynomials in x0
std::optional<std::vector<Scalar>> affine_guard_roots(const Expr& e, bool& simple) {
  std::vector<Scalar> roots;
  bool ok = true;
  auto walk = [&](auto&& self, const Expr& x) -> void {
    if (!ok) return;
    Kind k = x.kind();
    if (k == Kind::Recip || k == Kind::Norm) {
      ok = false;
      return;
    }
    if (k == Kind::Abs || k == Kind::Cases) {
      const Expr& g = x.arg(0);
      if (!g.is_polynomial()) {
        ok = false;
        return;
      }
      Coeffs c = expand_polynomial(g, 1);
      Scalar a0(0), a1(0);
      for (const auto& [ex, v] : c) {
        if (ex[0] == 0) a0 = v;
        else if (ex[0] == 1) a1 = v;
        else ok = false;
      }
      if (!ok || a1.is_zero()) {
        ok = false;
        return;
      }
      Scalar r = -(a0 / a1);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
      for (std::size_t i = 1; i < x.args().size(); ++i)
        if (!x.arg(i).is_r1_class()) simple = false;
    }
    for (const Expr& a : x.args()) self(self, a);
  };
  walk(walk, e);
  if (!ok) return std::nullopt;
  return roots;
}

Verdict ck_function(const Expr& f, int k) {
  if (f.min_dim() > 1) throw std::invalid_argument("C^k model is on R");
  SmoothnessVerdict v = certify_smooth(f, 1);
  if (v.smooth()) return Verdict::yes({"smooth, hence C^" + std::to_string(k) + ": " + first_line(v)});
  bool simple = true;
  auto roots = affine_guard_roots(f, simple);
  if (!roots) return Verdict::unknown("guards are not affine in t");
  std::vector<std::string> cert;
  for (const Scalar& r : *roots) {
    CkVerdict c = ck_regularity(f, k, r);
    if (c.mismatch_order >= 0 && c.mismatch_order <= k) {
      JetObstruction w;
      w.mode = JetObstruction::Mode::OneSided;
      w.f = f;
      w.point = {r};
      w.directions = {{Scalar(1)}};
      w.order = c.mismatch_order;
      w.left = {c.left};
      w.right = {c.right};
      w.note = "C^k functions have matching one-sided derivatives up to order k";
      return Verdict::no(std::move(w), c.reason);
    }
    if (c.reason.rfind("no exact", 0) == 0) return Verdict::unknown(c.reason);
    cert.push_back("at t = " + r.str() + ": " + c.reason);
  }
  if (!simple) return Verdict::unknown("branches are not elementary smooth");
  cert.push_back("smooth off the guard points");
  return Verdict::yes(std::move(cert));
}

std::optional<std::pair<std::vector<Scalar>, int>> regular_point(const PlotGen& p) {
  std::vector<std::vector<Scalar>> pts;
  pts.emplace_back(static_cast<std::size_t>(p.dims()), Scalar::ratio(1, 3));
  for (auto& u : sample_domain(p.domain, 20, 11)) pts.push_back(std::move(u));
  for (const auto& u : pts) {
    for (int j = 0; j < p.dims(); ++j) {
      try {
        auto d = evaluate_exact(differentiate(p.components[0], j).expr, u);
        if (d && !d->is_zero()) return std::make_pair(u, j);
      } catch (const EvalError&) {
      }
    }
  }
  return std::nullopt;
}

Verdict ck_plot(const PlotGen& p, int k) {
  if (p.all_smooth_curves || p.target_dim() != 1) throw std::invalid_argument("C^k model is on R");
  // t itself is C^k, so a plot must be smooth
  Verdict s = compose_all_smooth({Expr::var(0)}, p, nullptr, "t is in C^k");
  if (!s.is_yes()) return s;
  if (is_constant_plot(p)) return Verdict::yes({"constant plot"});
  auto reg = regular_point(p);
  if (!reg) return Verdict::unknown("no rational point with a nonzero derivative found");
  const auto& [u, j] = *reg;
  auto c = evaluate_exact(p.components[0], u);
  if (!c) return Verdict::unknown("plot value not exact at the regular point");
  Expr shifted = Expr::var(0) - Expr::constant(*c);
  Expr f = Expr::abs(shifted) * Expr::pow(shifted, static_cast<unsigned>(k));
  Expr comp = compose(f, p.components);
  std::vector<Scalar> dir(static_cast<std::size_t>(p.dims()), Scalar(0));
  dir[static_cast<std::size_t>(j)] = Scalar(1);
  // f is C^k and not C^(k+1) at c; f o p inherits the defect along dir
  CkVerdict fk = ck_regularity(f, k, *c);
  auto jm = jet_mismatch(comp, u, dir, k + 1);
  if (fk.result != Outcome::Yes || !jm || jm->order != k + 1)
    return Verdict::unknown("ck witness did not fire");
  SmoothnessVerdict v;
  v.status = SmoothStatus::NotCk;
  v.point = u;
  v.direction = dir;
  v.order = k + 1;
  v.jets = jm;
  v.divergence = probe_order(comp, u, dir, k + 1);
  v.reason = "one-sided derivatives of order " + std::to_string(k + 1) + " differ";
  CompositionNotSmooth w{f, p, comp, v, "f is C^" + std::to_string(k) + " by exact jets: " + fk.reason};
  return Verdict::no(std::move(w), "a C^k function composes non-smoothly with p");
}

// ---- subsets

bool is_orthant(const Carrier& c) {
  if (!c.equations.empty() || c.rational_points || static_cast<int>(c.inequalities.size()) != c.dim)
    return false;
  for (int i = 0; i < c.dim; ++i)
    if (!(c.inequalities[static_cast<std::size_t>(i)] == Expr::var(i))) return false;
  return true;
}

void collect_guards(const Expr& e, std::vector<Expr>& out, bool& ok) {
  switch (e.kind()) {
    case Kind::Abs:
    case Kind::Cases:
    case Kind::Recip: out.push_back(e.arg(0)); break;
    case Kind::Norm: {
      std::vector<Expr> sq;
      for (const Expr& a : e.args()) sq.push_back(Expr::pow(a, 2));
      out.push_back(Expr::sum(sq));
      break;
    }
    default: break;
  }
  for (const Expr& a : e.args()) collect_guards(a, out, ok);
}

std::vector<mpz_class> divisors(mpz_class a) {
  a = abs(a);
  std::vector<mpz_class> d;
  if (a > 1000000) return d;
  for (mpz_class k = 1; k * k <= a; ++k)
    if (a % k == 0) {
      d.push_back(k);
      if (k * k != a) d.push_back(a / k);
    }
  return d;
}

// rational roots of a univariate polynomial over Q(sqrt2); nullopt when
// the search is out of range
std::optional<std::vector<Scalar>> rational_roots(const Expr& g) {
  if (!g.is_polynomial() || g.min_dim() > 1) return std::nullopt;
  Coeffs c = expand_polynomial(g, 1);
  if (c.empty()) return std::nullopt;  // vanishes identically
  // a rational root kills both the rational and the sqrt2 part
  std::map<unsigned, Rational> part;
  for (const auto& [ex, v] : c)
    if (sgn(v.rational_part()) != 0) part[ex[0]] = v.rational_part();
  if (part.empty())
    for (const auto& [ex, v] : c) part[ex[0]] = v.sqrt2_part();
  mpz_class l = 1;
  for (const auto& [e, v] : part) l = lcm(l, mpz_class(v.get_den()));
  std::map<unsigned, mpz_class> ip;
  for (const auto& [e, v] : part) ip[e] = mpz_class(v * l);
  std::vector<Scalar> roots;
  auto low = ip.begin();
  if (low->first > 0) roots.push_back(Scalar(0));
  auto high = std::prev(ip.end());
  if (low == high) {
  } else {
    auto ps = divisors(low->second), qs = divisors(high->second);
    if (ps.empty() || qs.empty()) return std::nullopt;
    for (const auto& a : ps)
      for (const auto& b : qs)
        for (int s : {1, -1}) {
          Scalar r(Rational(mpz_class(s * a), b));
          if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
          auto v = evaluate_exact(g, std::vector<Scalar>{r});
          if (v && v->is_zero()) roots.push_back(r);
        }
  }
  std::vector<Scalar> exact;
  for (const Scalar& r : roots) {
    auto v = evaluate_exact(g, std::vector<Scalar>{r});
    if (v && v->is_zero()) exact.push_back(r);
  }
  return exact;
}

Verdict rational_function(const Expr& f) {
  if (f.min_dim() > 1) throw std::invalid_argument("the rationals sit in R");
  SmoothnessVerdict v = certify_smooth(f, 1);
  if (v.smooth()) return Verdict::yes({"restriction of a smooth function: " + first_line(v)});
  std::vector<Expr> guards;
  bool ok = true;
  collect_guards(f, guards, ok);
  std::vector<Scalar> bad;
  for (const Expr& g : guards) {
    auto r = rational_roots(g);
    if (!r) return Verdict::unknown("guard " + g.str() + " is not a tractable polynomial");
    for (const Scalar& s : *r) bad.push_back(s);
  }
  if (bad.empty())
    return Verdict::yes({"no guard vanishes at a rational point, so f is smooth on a neighbourhood of each rational"});
  for (const Scalar& r : bad) {
    std::vector<Scalar> p{r}, d{Scalar(1)};
    auto jm = jet_mismatch(f, p, d, 4);
    if (jm && jm->order >= 0) {
      JetObstruction w;
      w.f = f;
      w.point = p;
      w.directions = {d};
      w.order = jm->order;
      w.left = {jm->left};
      w.right = {jm->right};
      w.note = "rationals approach the point from both sides; a local smooth extension would match both one-sided jets";
      return Verdict::no(std::move(w), "one-sided jets differ at the rational point " + r.str());
    }
  }
  return Verdict::unknown("guards vanish at rational points but the jets agree there");
}

bool is_line_through(const PlotGen& q, std::vector<Scalar>& base, std::vector<Scalar>& dir) {
  if (q.dims() != 1) return false;
  base.clear();
  dir.clear();
  for (const Expr& c : q.components) {
    if (!c.is_polynomial()) return false;
    Coeffs k = expand_polynomial(c, 1);
    Scalar a0(0), a1(0);
    for (const auto& [ex, v] : k) {
      if (ex[0] == 0) a0 = v;
      else if (ex[0] == 1) a1 = v;
      else return false;
    }
    base.push_back(a0);
    dir.push_back(a1);
  }
  return true;
}

// a univariate expression that agrees with a smooth one near every point;
// resolves cases whose guards vanish only at 0
std::optional<SmoothnessVerdict> smooth_univariate(const Expr& h) {
  SmoothnessVerdict v = certify_smooth(h, 1);
  if (v.smooth() || v.not_ck()) return v;
  std::vector<Expr> guards;
  bool ok = true;
  collect_guards(h, guards, ok);
  for (const Expr& g : guards) {
    if (!g.is_polynomial()) return std::nullopt;
    Coeffs c = expand_polynomial(g, 1);
    if (c.size() != 1 || c.begin()->first[0] == 0) return std::nullopt;  // not c t^m
  }
  auto l = resolve_side(h, Scalar(0), -1), r = resolve_side(h, Scalar(0), 1);
  if (!l || !r || !l->is_r1_class() || !equal_nf(*l, *r)) return std::nullopt;
  auto at0 = evaluate_exact(h, std::vector<Scalar>{Scalar(0)});
  auto b0 = evaluate_exact(*l, std::vector<Scalar>{Scalar(0)});
  if (!at0 || !b0 || !(*at0 == *b0)) return std::nullopt;
  SmoothnessVerdict s;
  s.status = SmoothStatus::Smooth;
  s.trace = {"equals " + l->str() + " on both sides of 0 and at 0"};
  return s;
}

std::optional<Verdict> axes_extension(const Carrier& c, const Expr& f) {
  // coordinate axes through the origin
  int n = c.dim;
  std::vector<int> axes;
  for (const PlotGen& q : c.parametrizations) {
    std::vector<Scalar> b, d;
    if (!is_line_through(q, b, d)) return std::nullopt;
    if (std::any_of(b.begin(), b.end(), [](const Scalar& s) { return !s.is_zero(); })) return std::nullopt;
    int axis = -1;
    for (int i = 0; i < n; ++i) {
      const Scalar& di = d[static_cast<std::size_t>(i)];
      if (di.is_zero()) continue;
      if (axis >= 0 || !di.is_one()) return std::nullopt;
      axis = i;
    }
    if (axis < 0) return std::nullopt;
    axes.push_back(axis);
  }
  if (axes.empty()) return std::nullopt;
  std::vector<std::string> cert;
  for (int a : axes) {
    std::vector<Expr> sub(static_cast<std::size_t>(n), Expr());
    sub[static_cast<std::size_t>(a)] = Expr::var(0);
    Expr h = compose(f, sub);
    auto v = smooth_univariate(h);
    if (!v || !v->smooth()) return std::nullopt;
    cert.push_back("f on axis " + std::to_string(a) + ": " + first_line(*v));
  }
  cert.push_back("extension sum_i f(x_i e_i) - (m - 1) f(0) agrees with f on the axes and is smooth");
  return Verdict::yes(std::move(cert));
}

Verdict subset_function(const SpacePresentation& x, const Expr& f) {
  const Carrier& c = x.carrier;
  int n = c.dim;
  if (c.rational_points) return rational_function(f);
  if (is_orthant(c)) return orthant_membership(f, n);
  SmoothnessVerdict v = certify_smooth(f, n);
  if (v.smooth()) return Verdict::yes({"restriction of a smooth function: " + first_line(v)});
  if (auto a = axes_extension(c, f)) return *a;
  // refutations from the parametrizations, which are plots of the subset
  std::vector<std::vector<Scalar>> bases, dirs;
  std::vector<std::vector<Scalar>> rights;
  for (const PlotGen& q : c.parametrizations) {
    Expr h = compose(f, q.components);
    auto s = smooth_univariate(h);
    if (s && s->not_ck())
      return Verdict::no(CompositionNotSmooth{f, q, h, *s, "a parametrization of the subset"},
                         "f fails along a parametrization of the subset");
    std::vector<Scalar> b, d;
    if (is_line_through(q, b, d)) {
      bases.push_back(b);
      dirs.push_back(d);
    }
  }
  // lines of the subset through a common point: the first derivatives of
  // a smooth extension are given by one linear form
  if (dirs.size() >= 2 && std::all_of(bases.begin(), bases.end(), [&](const auto& b) { return b == bases[0]; })) {
    Matrix a;
    std::vector<Scalar> rhs;
    JetObstruction w;
    w.mode = JetObstruction::Mode::Inconsistent;
    w.f = f;
    w.point = bases[0];
    w.order = 1;
    bool ok = true;
    for (const auto& d : dirs) {
      auto jm = jet_mismatch(f, bases[0], d, 1);
      if (!jm || jm->order != -1) {
        ok = false;
        break;
      }
      a.push_back(d);
      rhs.push_back(jm->right[1]);
      w.directions.push_back(d);
      w.left.push_back(jm->left);
      w.right.push_back(jm->right);
    }
    if (ok && !solve(a, rhs)) {
      w.note = "the lines lie in the subset";
      return Verdict::no(std::move(w), "derivatives along the lines are not linear in the direction");
    }
  }
  if (!x.fn_generators.empty()) {
    if (auto g = express_in_generators(f, x.fn_generators, n))
      return Verdict::yes({"f = " + g->str() + " in the restricted generators"});
  }
  return Verdict::unknown("no smooth extension found and no obstruction");
}

Verdict subset_plot(const SpacePresentation& x, const PlotGen& p) {
  const Carrier& c = x.carrier;
  if (p.all_smooth_curves) return Verdict::unknown("schema plots are not subset plots");
  if (auto v = carrier_constraints(p, c)) return *v;
  if (c.rational_points) return Verdict::yes({"locally constant plot"});
  Verdict s = compose_all_smooth(coordinates(c.dim), p, nullptr, "coordinate functions restrict to the subset");
  if (s.is_yes()) s.certificate.push_back("image in the subset (checked on 100 samples)");
  return s;
}

// ---- quotients

Verdict group_function(const SpacePresentation& x, const Expr& f) {
  const FiniteMatrixGroup& g = x.carrier.group;
  if (!is_invariant(f, g)) throw std::invalid_argument("f is not invariant, so it is not a function on the quotient");
  SmoothnessVerdict v = certify_smooth(f, g.dim());
  if (v.smooth())
    return Verdict::yes({"pullback certified smooth: " + first_line(v),
                         "smooth invariants are smooth functions of the Hilbert map (Schwarz)"});
  if (v.not_ck())
    return Verdict::no(CompositionNotSmooth{f, identity_plot(g.dim()), f, v, "pi o id is a plot of the quotient"},
                       "the pullback is not smooth");
  return Verdict::unknown(v.reason);
}

Verdict group_plot(const SpacePresentation& x, const PlotGen& p) {
  const FiniteMatrixGroup& g = x.carrier.group;
  if (p.orbit_coords) {
    if (p.dims() == 2) {
      auto gens = x.fn_generators.empty() ? invariant_generators(g, 2) : x.fn_generators;
      std::vector<Scalar> center(2, Scalar(0));
      LiftResult lr = lift_witness(p, g, gens, center, Scalar::ratio(1, 2));
      if (lr.witness) return Verdict::no(*lr.witness, lr.reason);
      return Verdict::unknown(lr.reason);
    }
    return Verdict::unknown("orbit-coordinate plot with no lift test");
  }
  Verdict s = compose_all_smooth(coordinates(g.dim()), p, nullptr, "");
  if (s.is_yes()) {
    s.certificate.push_back("pi o q with q smooth");
    return s;
  }
  // a smooth lift may still exist; refute through invariants only
  auto gens = x.fn_generators.empty() ? invariant_generators(g, 2) : x.fn_generators;
  Verdict r = compose_all_smooth(gens, p, nullptr, "invariant functions are functions of every quotient plot");
  if (r.is_no()) return r;
  return Verdict::unknown("representative is not smooth; no lift found");
}

Verdict flow_plot(const SpacePresentation& x, const PlotGen& p) {
  Verdict s = compose_all_smooth(coordinates(2), p, nullptr, "");
  if (s.is_yes()) {
    s.certificate.push_back("pi o q with q smooth");
    return s;
  }
  if (auto w = step_obstruction(p, x.carrier.slope))
    return Verdict::no(*w, "jump " + w->invariant.str() + " is outside Z + " + x.carrier.slope.str() + " Z");
  return Verdict::unknown("representative is not smooth and no topological obstruction found");
}

Verdict flow_function(const SpacePresentation& x, const Expr& f) {
  if (is_constant_expr(f)) return Verdict::yes({"constant"});
  (void)x;
  throw std::invalid_argument("only constants descend to the flow quotient");
}

std::vector<int> wedge_blocks(const Carrier& c) {
  std::vector<int> b;
  for (const Carrier& p : c.pieces) b.push_back(p.dim);
  return b;
}

Verdict wedge_plot(const SpacePresentation& x, const PlotGen& p) {
  std::vector<int> blocks = wedge_blocks(x.carrier);
  if (is_constant_plot(p)) {
    // a constant plot must sit on a single piece
    return Verdict::yes({"constant plot"});
  }
  std::size_t off = 0;
  for (int b : blocks) {
    bool others_zero = true;
    for (std::size_t i = 0; i < p.components.size(); ++i)
      if ((i < off || i >= off + static_cast<std::size_t>(b)) && !is_zero_nf(p.components[i])) others_zero = false;
    if (others_zero) {
      std::vector<Expr> block(p.components.begin() + static_cast<long>(off),
                              p.components.begin() + static_cast<long>(off) + b);
      PlotGen q = PlotGen::make(block, p.domain);
      Verdict s = compose_all_smooth(coordinates(b), q, nullptr, "");
      if (s.is_yes()) {
        s.certificate.push_back("pi o I_i o q on a single piece");
        return s;
      }
      if (s.is_no()) return Verdict::unknown("block curve is not smooth");
    }
    off += static_cast<std::size_t>(b);
  }
  if (p.dims() == 1) {
    std::vector<Scalar> candidates{Scalar(0)};
    for (const Expr& c : p.components)
      for (const LocusPoint& lp : guard_locus_points(c, p.domain.box()))
        if (lp.exact && std::find(candidates.begin(), candidates.end(), lp.point[0]) == candidates.end())
          candidates.push_back(lp.point[0]);
    for (const Scalar& t0 : candidates) {
      LiftResult lr = lift_witness_wedge(p, blocks, t0);
      if (lr.witness) return Verdict::no(*lr.witness, lr.reason);
    }
  }
  return Verdict::unknown("no single-piece factorization and no branch jump found");
}

// ---- generated diffeologies

bool only_curves(const std::vector<PlotGen>& d0) {
  return !d0.empty() && std::all_of(d0.begin(), d0.end(),
                                    [](const PlotGen& q) { return q.all_smooth_curves || q.dims() == 1; });
}

bool phi_is_standard(const std::vector<PlotGen>& d0, int n) {
  for (const PlotGen& q : d0) {
    if (q.all_smooth_curves) return true;
    if (q.dims() == n && q.components.size() == static_cast<std::size_t>(n)) {
      bool id = true;
      for (int i = 0; i < n; ++i) id = id && equal_nf(q.components[static_cast<std::size_t>(i)], Expr::var(i));
      if (id) return true;
    }
  }
  return false;
}

// p = h o G with G a polynomial of degree <= 4 in the parameters and h a
// polynomial curve
std::optional<Expr> polynomial_core(const PlotGen& p) {
  int d = p.dims();
  for (const Expr& c : p.components)
    if (!c.is_polynomial()) return std::nullopt;
  std::vector<Expr> cands;
  for (const Expr& c : p.components) {
    Coeffs k = expand_polynomial(c, d);
    k.erase(Exponents(static_cast<std::size_t>(d), 0u));
    if (k.empty()) continue;
    unsigned deg = 0;
    for (const auto& [ex, v] : k) {
      unsigned t = 0;
      for (unsigned e : ex) t += e;
      deg = std::max(deg, t);
    }
    if (deg <= 4) cands.push_back(from_coeffs(k));
  }
  for (int j = 0; j < d; ++j) cands.push_back(Expr::var(j));
  for (const Expr& g : cands) {
    bool all = true;
    for (const Expr& c : p.components) {
      if (to_poly(c).is_constant()) continue;
      all = all && express_in_generators(c, {g}, d).has_value();
      if (!all) break;
    }
    if (all) return g;
  }
  return std::nullopt;
}

// G with q o G = p, solved from components of q that are affine in a single
// variable
std::optional<std::vector<Expr>> affine_preimage(const PlotGen& q, const PlotGen& p) {
  int d = q.dims();
  if (q.all_smooth_curves || q.domain != Domain::all(d) || q.components.size() != p.components.size())
    return std::nullopt;
  std::vector<std::optional<Expr>> g(static_cast<std::size_t>(d));
  std::vector<Scalar> zero(static_cast<std::size_t>(d), Scalar(0));
  for (std::size_t i = 0; i < q.components.size(); ++i) {
    const Expr& c = q.components[i];
    int var = -1;
    std::optional<Scalar> slope;
    bool affine = true;
    for (int j = 0; j < d && affine; ++j) {
      Expr dj = differentiate(c, j).expr;
      if (is_zero_nf(dj)) continue;
      if (var >= 0 || !to_poly(dj).is_constant()) affine = false;
      var = j;
      slope = evaluate_exact(dj, zero);
    }
    if (!affine || var < 0 || !slope || slope->is_zero() || g[static_cast<std::size_t>(var)]) continue;
    auto b = evaluate_exact(c, zero);
    if (!b) continue;
    g[static_cast<std::size_t>(var)] =
        (p.components[i] - Expr::constant(*b)) * Expr::constant(Scalar(1) / *slope);
  }
  std::vector<Expr> out;
  for (auto& e : g) {
    if (!e) return std::nullopt;
    out.push_back(*e);
  }
  for (std::size_t i = 0; i < q.components.size(); ++i)
    if (!equal_nf(compose(q.components[i], out), p.components[i])) return std::nullopt;
  return out;
}

Verdict generated_plot(const std::vector<PlotGen>& d0, const Carrier& carrier, const PlotGen& p,
                       std::uint64_t seed) {
  if (is_constant_plot(p)) return Verdict::yes({"constant plot (Covering)"});
  int n = carrier.dim;
  for (const PlotGen& q : d0) {
    if (q.all_smooth_curves) {
      // factorization through one coordinate: p = c o pr_j
      std::set<int> vars;
      for (const Expr& c : p.components)
        for (int j = 0; j < p.dims(); ++j)
          if (!is_zero_nf(differentiate(c, j).expr)) vars.insert(j);
      if (vars.size() <= 1) {
        Verdict s = compose_all_smooth(coordinates(n), p, nullptr, "");
        if (s.is_yes()) {
          s.certificate.push_back("p factors through a smooth curve via a coordinate projection");
          return s;
        }
      }
      if (auto g = polynomial_core(p))
        return Verdict::yes({"p = h o G with G = " + g->str() + " and h a polynomial curve"});
      continue;
    }
    if (auto g = affine_preimage(q, p)) {
      PlotGen gp = PlotGen::make(*g, p.dims());
      gp.domain = p.domain;
      Verdict s = compose_all_smooth(coordinates(q.dims()), gp, nullptr, "");
      if (s.is_yes()) {
        s.certificate.push_back("p = q o G with G smooth");
        return s;
      }
    }
    if (q.components.size() != p.components.size() || q.dims() != p.dims()) continue;
    bool same = q.domain == p.domain;
    for (std::size_t i = 0; same && i < q.components.size(); ++i) same = equal_nf(q.components[i], p.components[i]);
    if (same) return Verdict::yes({"a generator"});
    // q the identity-like generator: p = q o p
    if (q.dims() == n && phi_is_standard({q}, n)) {
      Verdict s = compose_all_smooth(coordinates(n), p, nullptr, "");
      if (s.is_yes()) {
        s.certificate.push_back("p = id o p");
        return s;
      }
    }
  }
  if (only_curves(d0) && p.dims() >= 2) {
    if (auto r = rank_obstruction(p, 20, seed))
      return Verdict::no(RankObstruction{p, *r}, "plots generated by curves have rank <= 1");
  }
  // functions of Phi D0 composed with p
  std::vector<Expr> fs;
  for (const Expr& c : coordinates(n))
    if (phi_contains(d0, c, n, seed).is_yes()) fs.push_back(c);
  if (!fs.empty()) {
    Verdict r = compose_all_smooth(fs, p, nullptr, "a function of Phi D0");
    if (r.is_no()) return r;
  }
  return Verdict::unknown("no factorization through a generator found");
}

}  // namespace

// ---------------------------------------------------------------------------

PlotGen line_plot(const std::vector<Scalar>& point, const std::vector<Scalar>& dir) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < point.size(); ++i)
    comps.push_back(Expr::constant(point[i]) + Expr::constant(dir[i]) * Expr::var(0));
  return PlotGen::make(std::move(comps), 1);
}

Verdict phi_contains(const std::vector<PlotGen>& d0, const Expr& f, int dim, std::uint64_t seed) {
  if (f.min_dim() > dim) throw std::invalid_argument("function arity exceeds the carrier dimension");
  if (d0.empty()) return Verdict::yes({"only constant plots; every function composes smoothly"});
  std::vector<std::string> cert;
  std::string unknown;
  for (const PlotGen& q : d0) {
    if (q.all_smooth_curves) {
      Verdict b = boman_smoothness(f, identity_plot(dim), 30, seed);
      if (b.is_no()) return b;
      if (b.is_yes()) {
        cert.push_back("smooth along all curves: " + b.certificate.front());
      } else if (unknown.empty()) {
        unknown = b.reason;
      }
      continue;
    }
    Verdict v = compose_all_smooth({f}, q, nullptr, "a generating plot");
    if (v.is_no()) return v;
    if (v.is_yes()) cert.push_back(v.certificate.front());
    else if (unknown.empty()) unknown = v.reason;
  }
  if (!unknown.empty()) return Verdict::unknown(unknown);
  return Verdict::yes(std::move(cert));
}

Verdict pi_contains(const std::vector<Expr>& f0, const PlotGen& p, const Carrier& carrier) {
  if (p.all_smooth_curves) return Verdict::unknown("schema plot");
  if (!p.orbit_coords && p.target_dim() != carrier.dim)
    throw std::invalid_argument("plot arity does not match the carrier");
  if (auto v = carrier_constraints(p, carrier)) return *v;
  if (f0.empty()) return Verdict::yes({"no generators; every map is a plot"});
  Verdict v = compose_all_smooth(f0, p, p.orbit_coords ? &f0 : nullptr, "a generator of F0");
  return v;
}

Verdict gamma_curves(const std::vector<Expr>& f0, const PlotGen& c, const Carrier& carrier) {
  if (c.dims() != 1) throw std::invalid_argument("curves have a 1-dimensional domain");
  return pi_contains(f0, c, carrier);
}

Verdict boman_smoothness(const Expr& f, const PlotGen& p, int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("probes must be >= 1");
  if (p.all_smooth_curves) throw std::invalid_argument("boman probing needs an explicit plot");
  Expr h = compose(f, p.components);
  int d = std::max(p.dims(), h.min_dim());
  Box box = p.domain.box();
  std::vector<PlotGen> curves;
  for (const LocusPoint& lp : guard_locus_points(h, box)) {
    if (static_cast<int>(curves.size()) >= probes / 2) break;
    curves.push_back(line_plot(lp.point, lp.direction));
  }
  ExprSampler s(1, seed);
  auto center = sample_domain(p.domain, 1, seed).front();
  while (static_cast<int>(curves.size()) < probes) {
    std::vector<Expr> comps;
    for (int i = 0; i < d; ++i) {
      std::vector<Expr> terms{Expr::constant(i < static_cast<int>(center.size()) ? center[static_cast<std::size_t>(i)] : Scalar(0))};
      int deg = 1 + s.below(5);
      for (int j = 1; j <= deg; ++j) {
        Scalar c = s.small_rational();
        if (!c.is_zero()) terms.push_back(Expr::constant(c) * Expr::pow(Expr::var(0), static_cast<unsigned>(j)));
      }
      comps.push_back(Expr::sum(std::move(terms)));
    }
    if (s.below(2) == 0) {
      auto k = static_cast<std::size_t>(s.below(d));
      comps[k] = comps[k] + Expr::flat(Expr::var(0));
    }
    curves.push_back(PlotGen::make(std::move(comps), 1));
  }
  int passed = 0;
  for (const PlotGen& g : curves) {
    Expr c = compose(h, g.components);
    SmoothnessVerdict v = certify_smooth(c, 1);
    if (v.not_ck())
      return Verdict::no(CompositionNotSmooth{h, g, c, v, "probe curve"}, "fails along a probe curve");
    if (v.smooth()) ++passed;
  }
  SmoothnessVerdict direct = certify_smooth(h, box);
  if (direct.smooth())
    return Verdict::yes({first_line(direct), std::to_string(passed) + "/" + std::to_string(curves.size()) +
                                                 " probe curves certified"});
  return Verdict::unknown("probes passed (" + std::to_string(passed) + "/" + std::to_string(curves.size()) +
                          " certified)");
}

Verdict function_member(const SpacePresentation& x, const Expr& f) {
  int n = x.dim();
  if (f.min_dim() > n) throw std::invalid_argument("function arity exceeds the carrier dimension");
  const std::string& k = x.construction;
  if (k == "standard") return standard_function(f, n);
  if (k.rfind("ck:", 0) == 0) return ck_function(f, ck_order(k));
  if (k == "phi") return phi_contains(x.plot_generators, f, n);
  if (k == "pi") return generated_function(x.fn_generators, x.carrier, f, n);
  switch (x.carrier.kind) {
    case CarrierKind::Subset: return subset_function(x, f);
    case CarrierKind::QuotientByGroup: return group_function(x, f);
    case CarrierKind::QuotientByFlow: return flow_function(x, f);
    case CarrierKind::Wedge: return phi_contains(x.plot_generators, f, n);
    case CarrierKind::Euclidean: break;
  }
  if (x.fn_generators.empty()) return phi_contains(x.plot_generators, f, n);
  return generated_function(x.fn_generators, x.carrier, f, n);
}

Verdict plot_member(const SpacePresentation& x, const PlotGen& p) {
  const std::string& k = x.construction;
  if (k == "standard") {
    if (p.all_smooth_curves) return Verdict::yes({"smooth curves are plots"});
    return compose_all_smooth(coordinates(x.dim()), p, nullptr, "a coordinate function");
  }
  if (k.rfind("ck:", 0) == 0) return ck_plot(p, ck_order(k));
  if (k == "pi") return pi_contains(x.fn_generators, p, x.carrier);
  if (k == "phi") {
    if (is_constant_plot(p)) return Verdict::yes({"constant plot"});
    if (phi_is_standard(x.plot_generators, x.dim())) {
      Verdict s = compose_all_smooth(coordinates(x.dim()), p, nullptr, "coordinates lie in Phi D0");
      if (s.is_yes()) s.certificate.push_back("Phi D0 is the standard structure, so Pi Phi D0 is too");
      return s;
    }
    return generated_plot(x.plot_generators, x.carrier, p, 42);
  }
  switch (x.carrier.kind) {
    case CarrierKind::Subset: return subset_plot(x, p);
    case CarrierKind::QuotientByGroup: return group_plot(x, p);
    case CarrierKind::QuotientByFlow: return flow_plot(x, p);
    case CarrierKind::Wedge: return wedge_plot(x, p);
    case CarrierKind::Euclidean: break;
  }
  if (x.plot_generators.empty()) return pi_contains(x.fn_generators, p, x.carrier);
  return generated_plot(x.plot_generators, x.carrier, p, 42);
}

SpacePresentation pi_of(const std::vector<Expr>& f0, const Carrier& c, std::string label) {
  SpacePresentation p;
  p.label = label.empty() ? "Pi F0" : std::move(label);
  p.carrier = c;
  p.fn_generators = f0;
  p.construction = "pi";
  return p;
}

SpacePresentation phi_of(const std::vector<PlotGen>& d0, const Carrier& c, std::string label) {
  SpacePresentation p;
  p.label = label.empty() ? "Phi D0" : std::move(label);
  p.carrier = c;
  p.plot_generators = d0;
  p.construction = "phi";
  return p;
}

std::vector<Expr> test_functions(const SpacePresentation& y) {
  int n = y.dim();
  if (y.construction == "standard") return coordinates(n);
  if (y.construction.rfind("ck:", 0) == 0) {
    int k = ck_order(y.construction);
    return {Expr::var(0), Expr::abs(Expr::var(0)) * Expr::pow(Expr::var(0), static_cast<unsigned>(k))};
  }
  if (!y.fn_generators.empty()) return y.fn_generators;
  if (y.carrier.kind == CarrierKind::Euclidean && phi_is_standard(y.plot_generators, n)) return coordinates(n);
  return {};
}

Verdict check_functionally_smooth(const std::vector<Expr>& F, const SpacePresentation& x,
                                  const SpacePresentation& y) {
  if (static_cast<int>(F.size()) != y.dim()) throw std::invalid_argument("map components do not match the target");
  for (const Expr& c : F)
    if (c.min_dim() > x.dim()) throw std::invalid_argument("map arity exceeds the source dimension");
  if (std::all_of(F.begin(), F.end(), is_constant_expr))
    return Verdict::yes({"constant map: pullbacks are constants"});
  bool identity = static_cast<int>(F.size()) == x.dim();
  for (std::size_t i = 0; identity && i < F.size(); ++i) identity = equal_nf(F[i], Expr::var(static_cast<int>(i)));
  if (identity && x.construction == y.construction && x.construction != "" &&
      x.fn_generators.size() == y.fn_generators.size()) {
    bool same = true;
    for (std::size_t i = 0; same && i < x.fn_generators.size(); ++i) same = equal_nf(x.fn_generators[i], y.fn_generators[i]);
    if (same) return Verdict::yes({"identity between equal structures"});
  }
  std::vector<Expr> tests = test_functions(y);
  if (tests.empty()) return Verdict::unknown("target has no test functions");
  std::vector<std::string> cert;
  std::string unknown;
  for (const Expr& g : tests) {
    Expr h = compose(g, F);
    Verdict v = function_member(x, h);
    if (v.is_no()) {
      v.reason = g.str() + " o F is not a function of the source: " + v.reason;
      return v;
    }
    if (v.is_yes()) cert.push_back(g.str() + " o F in F_X");
    else if (unknown.empty()) unknown = g.str() + " o F: " + v.reason;
  }
  if (!unknown.empty()) return Verdict::unknown(unknown);
  if (y.construction.rfind("ck:", 0) == 0)
    return Verdict::unknown("test functions pass, but C^k targets have no finite generating set");
  return Verdict::yes(std::move(cert));
}

PlotwiseVerdict check_diffeologically_smooth(const std::vector<Expr>& F, const SpacePresentation& x,
                                             const SpacePresentation& y,
                                             std::optional<std::vector<PlotGen>> plots) {
  if (static_cast<int>(F.size()) != y.dim()) throw std::invalid_argument("map components do not match the target");
  std::vector<PlotGen> ps = plots ? *plots : x.plot_generators;
  if (ps.empty() && x.construction == "standard") ps.push_back(identity_plot(x.dim()));
  PlotwiseVerdict out;
  std::vector<std::string> cert;
  std::string unknown;
  std::optional<Verdict> refuted;
  for (const PlotGen& p : ps) {
    Verdict v;
    if (p.all_smooth_curves) {
      Verdict s = compose_all_smooth(F, identity_plot(x.dim()), nullptr, "");
      bool target_takes_curves = y.construction == "standard" ||
                                 (y.carrier.kind == CarrierKind::Euclidean && y.construction.empty() &&
                                  !y.plot_generators.empty() && y.fn_generators.empty() &&
                                  (y.plot_generators[0].all_smooth_curves || phi_is_standard(y.plot_generators, y.dim())));
      if (s.is_yes() && target_takes_curves)
        v = Verdict::yes({"F smooth, so F o c is a smooth curve of the target"});
      else
        v = Verdict::unknown("schema plot: F o c not decided");
    } else {
      PlotGen q = p;
      q.components = compose_all(F, p.components);
      v = plot_member(y, q);
    }
    if (v.is_no() && !refuted) refuted = v;
    if (v.is_yes()) cert.push_back("generator maps to a plot");
    else if (v.is_unknown() && unknown.empty()) unknown = v.reason;
    out.per_plot.push_back(std::move(v));
  }
  if (refuted) out.overall = *refuted;
  else if (!unknown.empty()) out.overall = Verdict::unknown(unknown);
  else out.overall = Verdict::yes(cert.empty() ? std::vector<std::string>{"no plots"} : cert);
  return out;
}

std::string_view reflexivity_name(Reflexivity r) {
  switch (r) {
    case Reflexivity::Reflexive: return "Reflexive";
    case Reflexivity::NonReflexive: return "NonReflexive";
    case Reflexivity::Unknown: break;
  }
  return "Unknown";
}

ReflexivityReport reflexivity_report(const SpacePresentation& x) {
  ReflexivityReport r;
  if (x.construction == "pi") {
    r.status = Reflexivity::Reflexive;
    r.argument = "Pi of a function family is a reflexive diffeology";
  } else if (x.construction == "phi") {
    r.status = Reflexivity::Reflexive;
    r.argument = "Phi of a plot family is a reflexive differential structure";
  } else if (x.construction == "standard") {
    r.status = Reflexivity::Reflexive;
    r.argument = "the standard structures are Phi and Pi of each other";
  } else {
    r.argument = "not built by Pi or Phi; needs a witness pair";
  }
  return r;
}

ReflexivityReport nonreflexive_by_plot(const SpacePresentation& x, const SpacePresentation& roundtrip,
                                       const PlotGen& p) {
  ReflexivityReport r;
  r.plot = p;
  r.in_roundtrip = plot_member(roundtrip, p);
  r.in_original = plot_member(x, p);
  if (r.in_roundtrip->is_yes() && r.in_original->is_no()) {
    r.status = Reflexivity::NonReflexive;
    r.argument = "plot in Pi Phi D but not in D";
  } else {
    r.argument = "witness pair not certified";
  }
  return r;
}

ReflexivityReport nonreflexive_by_function(const SpacePresentation& x, const SpacePresentation& roundtrip,
                                           const Expr& f) {
  ReflexivityReport r;
  r.function = f;
  r.in_roundtrip = function_member(roundtrip, f);
  r.in_original = function_member(x, f);
  if (r.in_roundtrip->is_yes() && r.in_original->is_no()) {
    r.status = Reflexivity::NonReflexive;
    r.argument = "function in Phi Pi F but not in F";
  } else {
    r.argument = "witness pair not certified";
  }
  return r;
}

Verdict Frolicher::curve(const PlotGen& c) const { return gamma_curves(f0, c, carrier); }

Verdict Frolicher::function(const Expr& f) const {
  int n = carrier.dim;
  if (is_constant_expr(f)) return Verdict::yes({"constant"});
  if (f0.empty()) {
    if (carrier.kind == CarrierKind::QuotientByFlow)
      throw std::invalid_argument("only constants descend to the flow quotient");
    return Verdict::unknown("no generators");
  }
  Verdict g = generated_function(f0, carrier, f, n);
  if (!g.is_unknown()) return g;
  return Verdict::unknown("not decided on the curve family");
}

Frolicher frolicher_saturate(const std::vector<Expr>& f0, const Carrier& carrier) {
  return Frolicher{f0, carrier};
}

// ---------------------------------------------------------------------------
// law suites

LawTally LawReport::total() const {
  LawTally t;
  for (const LawTally* l : {&pi_phi_pi, &phi_pi_phi, &gamma_phi_gamma, &functoriality}) {
    t.comparisons += l->comparisons;
    t.contradictions += l->contradictions;
    t.unknown += l->unknown;
  }
  return t;
}

namespace {

Expr pool_function(ExprSampler& s) {
  Expr x = Expr::var(s.below(2)), y = Expr::var(s.below(2));
  Expr p = s.polynomial(2, 2);
  switch (s.below(6)) {
    case 0: return p;
    case 1: return Expr::flat(x - Expr::constant(s.small_rational())) + p;
    case 2: return Expr::abs(x - Expr::constant(s.small_rational())) + p;
    case 3: return Expr::abs(x) * Expr::pow(y, 2);
    case 4: return Expr::cases(x, Expr(), Expr(), Expr::flat(x)) * p;
    default: return Expr::sin(p) + y;
  }
}

Expr pool_component(ExprSampler& s, int dims) {
  ExprSampler inner(dims, s.next());
  Expr t = Expr::var(inner.below(dims));
  Expr p = inner.polynomial(2, 2);
  switch (s.below(5)) {
    case 0:
    case 1: return p;
    case 2: return Expr::abs(t) + p;
    case 3: return Expr::flat(t) + p;
    default: return Expr::cases(t, Expr(), Expr(), Expr::flat(t));
  }
}

PlotGen pool_plot(ExprSampler& s, int dims) {
  return PlotGen::make({pool_component(s, dims), pool_component(s, dims)}, dims);
}

void tally(LawTally& t, const Verdict& a, const Verdict& b, const std::string& what,
           std::vector<std::string>& log) {
  ++t.comparisons;
  if (a.is_unknown() || b.is_unknown()) ++t.unknown;
  if (contradicts(a, b)) {
    ++t.contradictions;
    log.push_back(what);
  }
}

}  // namespace

LawReport galois_law_suite(int presentations, std::uint64_t seed) {
  LawReport rep;
  rep.presentations = presentations;
  Carrier r2 = Carrier::euclidean(2);
  ExprSampler s(2, seed);
  for (int i = 0; i < presentations; ++i) {
    std::vector<Expr> f0{Expr::var(s.below(2))};
    if (s.below(2)) f0.push_back(pool_function(s));
    std::vector<PlotGen> d0{pool_plot(s, 1 + s.below(2))};
    std::vector<Expr> fns;
    std::vector<PlotGen> plots, curves;
    for (int k = 0; k < 10; ++k) fns.push_back(pool_function(s));
    for (int k = 0; k < 10; ++k) {
      plots.push_back(pool_plot(s, 1 + s.below(2)));
      if (plots.back().dims() == 1) curves.push_back(plots.back());
    }
    std::string tag = "presentation " + std::to_string(i);

    // Pi = Pi Phi Pi with Phi Pi F0 evaluated on the pool
    SpacePresentation pf = pi_of(f0, r2);
    std::vector<Expr> mid = f0;
    for (const Expr& f : fns)
      if (function_member(pf, f).is_yes()) mid.push_back(f);
    for (const PlotGen& x : plots)
      tally(rep.pi_phi_pi, pi_contains(f0, x, r2), pi_contains(mid, x, r2), tag + ": Pi Phi Pi", rep.contradictions);

    // Phi = Phi Pi Phi with Pi Phi D0 evaluated on the pool
    SpacePresentation pd = phi_of(d0, r2);
    std::vector<PlotGen> midp = d0;
    for (const PlotGen& x : plots)
      if (plot_member(pd, x).is_yes()) midp.push_back(x);
    for (const Expr& f : fns)
      tally(rep.phi_pi_phi, phi_contains(d0, f, 2, seed), phi_contains(midp, f, 2, seed), tag + ": Phi Pi Phi",
            rep.contradictions);

    // Gamma = Gamma Phi Gamma
    Frolicher fr = frolicher_saturate(f0, r2);
    std::vector<Expr> midg = f0;
    for (const Expr& f : fns)
      if (fr.function(f).is_yes()) midg.push_back(f);
    for (const PlotGen& c : curves)
      tally(rep.gamma_phi_gamma, gamma_curves(f0, c, r2), gamma_curves(midg, c, r2), tag + ": Gamma Phi Gamma",
            rep.contradictions);

    // functoriality: D-smooth into standard R^2 implies smooth between the Phi images
    SpacePresentation x;
    x.label = "generated";
    x.carrier = r2;
    x.plot_generators = d0;
    SpacePresentation std2 = standard_space(2);
    for (int k = 0; k < 2; ++k) {
      std::vector<Expr> F{pool_function(s), s.polynomial(2, 2)};
      Verdict d = check_diffeologically_smooth(F, x, std2).overall;
      if (!d.is_yes()) continue;
      Verdict f = check_functionally_smooth(F, phi_of(d0, r2), std2);
      // only D-smooth => functionally smooth is claimed
      tally(rep.functoriality, d, f, tag + ": functoriality", rep.contradictions);
    }
  }
  return rep;
}

}  // namespace smoothkit
