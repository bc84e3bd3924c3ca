#include "smoothkit/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "smoothkit/jets.hpp"
#include "smoothkit/normal_form.hpp"

namespace smoothkit {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

std::string_view smooth_status_name(SmoothStatus s) {
  switch (s) {
    case SmoothStatus::Smooth: return "certified-smooth";
    case SmoothStatus::NotCk: return "certified-not-ck";
    case SmoothStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace {

constexpr int kJetOrder = kMaxProbeOrder;
constexpr int kMaxDepth = 48;

std::string brief(const Expr& e) {
  std::string s = e.str();
  if (s.size() > 72) s = s.substr(0, 69) + "...";
  return s;
}

bool same_support_ratio(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero() || a.terms().size() != b.terms().size()) return false;
  std::optional<Scalar> ratio;
  auto ib = b.terms().begin();
  for (auto ia = a.terms().begin(); ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return false;
    Scalar r = ia->second / ib->second;
    if (ratio && !(*ratio == r)) return false;
    ratio = r;
  }
  return ratio && ratio->sign() > 0;
}

class Certifier {
 public:
  explicit Certifier(const Box& r) : region_(r) {}

  std::vector<std::string> trace;

  bool smooth(const Expr& e, int depth = 0) {
    if (depth > kMaxDepth) return false;
    if (e.is_r1_class()) {
      if (depth == 0) note("R1: " + brief(e));
      return true;
    }
    std::string key = e.str();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::size_t mark = trace.size();
    bool ok = true;
    Poly p = to_poly(e);
    for (const auto& [m, c] : p.terms()) {
      if (!term_smooth(m, depth + 1)) {
        ok = false;
        break;
      }
    }
    if (!ok) trace.resize(mark);
    memo_[key] = ok;
    return ok;
  }

 private:
  void note(std::string s) {
    if (trace.size() < 64) trace.push_back(std::move(s));
  }

  int sign(const Expr& u, bool allow_zero) { return certified_sign(u, region_, allow_zero); }

  bool term_smooth(const Monomial& m, int depth) {
    std::size_t mark = trace.size();
    bool all = std::all_of(m.begin(), m.end(),
                           [&](const auto& f) { return atom_smooth(f.first.expr, depth); });
    if (all) return true;
    trace.resize(mark);
    for (const auto& [at, n] : m) {
      if (at.expr.kind() != Kind::Flat) continue;
      const Expr& w = at.expr.arg(0);
      if (flat_dominated(m, at.expr, w, depth)) {
        note("R2: flat(" + brief(w) + ") dominates its cofactor near zeros of " + brief(w));
        return true;
      }
      trace.resize(mark);
    }
    return false;
  }

  // every factor of m other than `flat` is moderate along zeros(w)
  bool flat_dominated(const Monomial& m, const Expr& flat, const Expr& w, int depth) {
    if (!flat_ok(w, depth)) return false;
    for (const auto& [at, n] : m) {
      if (at.expr == flat) continue;
      if (!moderate_atom(at.expr, w, depth + 1)) return false;
    }
    return true;
  }

  bool atom_smooth(const Expr& a, int depth) {
    if (depth > kMaxDepth) return false;
    switch (a.kind()) {
      case Kind::Const:
      case Kind::Var: return true;
      case Kind::Sin:
      case Kind::Cos: return smooth(a.arg(0), depth + 1);
      case Kind::Flat: return flat_ok(a.arg(0), depth + 1);
      case Kind::Abs:
      case Kind::Recip: {
        int s = sign(a.arg(0), false);
        if (s == 0 || !smooth(a.arg(0), depth + 1)) return false;
        note(std::string(kind_name(a.kind())) + ": argument has sign " + (s > 0 ? "+" : "-") +
             " on the region");
        return true;
      }
      case Kind::Norm: {
        std::vector<Expr> sq;
        for (const Expr& v : a.args()) sq.push_back(Expr::pow(v, 2));
        if (sign(Expr::sum(sq), false) <= 0) return false;
        for (const Expr& v : a.args())
          if (!smooth(v, depth + 1)) return false;
        note("norm: radicand positive on the region");
        return true;
      }
      case Kind::Cases: return cases_smooth(a, depth + 1);
      default: return smooth(a, depth + 1);
    }
  }

  // flat(w) = psi(w^2) with psi smooth, so w^2 smooth suffices
  bool flat_ok(const Expr& w, int depth) {
    if (smooth(w, depth + 1)) return true;
    return smooth(normal_form(w * w), depth + 1);
  }

  bool moderate(const Expr& e, const Expr& w, int depth) {
    if (depth > kMaxDepth) return false;
    if (e.is_r1_class()) return true;
    Poly p = to_poly(e);
    for (const auto& [m, c] : p.terms())
      for (const auto& [at, n] : m)
        if (!moderate_atom(at.expr, w, depth + 1)) return false;
    return true;
  }

  bool moderate_atom(const Expr& a, const Expr& w, int depth) {
    if (depth > kMaxDepth) return false;
    std::size_t mark = trace.size();
    if (atom_smooth(a, depth)) return true;
    trace.resize(mark);
    switch (a.kind()) {
      case Kind::Var: return true;
      case Kind::Sin:
      case Kind::Cos:
      case Kind::Flat: return moderate(a.arg(0), w, depth + 1);
      case Kind::Recip:
      case Kind::Abs: return moderate(a.arg(0), w, depth + 1) && controlled(a.arg(0), w);
      case Kind::Norm:
        for (const Expr& v : a.args())
          if (!moderate(v, w, depth + 1)) return false;
        return controlled(a, w);
      case Kind::Cases: {
        const Expr& g = a.arg(0);
        int s = sign(g, false);
        if (s > 0) return moderate(a.arg(3), w, depth + 1);
        if (s < 0) return moderate(a.arg(1), w, depth + 1);
        if (!controlled(g, w)) return false;
        int s0 = sign(g, true);
        if (s0 <= 0 && !moderate(a.arg(1), w, depth + 1)) return false;
        if (s0 >= 0 && !moderate(a.arg(3), w, depth + 1)) return false;
        return true;
      }
      default: return false;
    }
  }

  // |u| = c |w|^j for some c > 0, j in 1..3 (so zeros(u) = zeros(w))
  bool controlled(const Expr& u, const Expr& w) {
    if (u == w) return true;
    Poly uu = to_poly(u * u);
    Poly ww = to_poly(w * w);
    Poly wj = ww;
    for (int j = 1; j <= 3; ++j) {
      if (same_support_ratio(uu, wj)) return true;
      wj = wj * ww;
    }
    return false;
  }

  // zeros(g) inside zeros(w)
  bool zeros_contain(const Expr& g, const Expr& w) { return controlled(w, g); }

  bool flat_term_at(const Monomial& m, const Expr& g, int depth) {
    std::size_t mark = trace.size();
    for (const auto& [at, n] : m) {
      if (at.expr.kind() != Kind::Flat) continue;
      const Expr& w = at.expr.arg(0);
      if (zeros_contain(g, w) && flat_dominated(m, at.expr, w, depth)) return true;
      trace.resize(mark);
    }
    return false;
  }

  struct Split {
    Poly plain;
    Poly flat;
  };

  Split split_branch(const Expr& branch, const Expr& g, int depth) {
    Split s;
    Poly p = to_poly(branch);
    for (const auto& [m, c] : p.terms()) {
      Poly t = Poly::monomial(m, c);
      if (flat_term_at(m, g, depth))
        s.flat = s.flat + t;
      else
        s.plain = s.plain + t;
    }
    return s;
  }

  // d vanishes on zeros(g)
  bool vanishes_on(const Poly& d, const Expr& g, int depth) {
    if (d.is_zero()) return true;
    bool all_flat = std::all_of(d.terms().begin(), d.terms().end(),
                                [&](const auto& t) { return flat_term_at(t.first, g, depth); });
    if (all_flat) return true;
    // affine guard: substitute the solved variable
    Poly pg = to_poly(g);
    int var = -1;
    Scalar coef;
    for (const auto& [m, c] : pg.terms()) {
      if (m.empty()) continue;
      if (m.size() != 1 || m[0].second != 1 || m[0].first.rank != 0) return false;
      if (var < 0) {
        var = m[0].first.var;
        coef = c;
      }
    }
    if (var < 0) return false;
    // x_var = -(g - coef x_var) / coef
    Expr rest = g - Expr::constant(coef) * Expr::var(var);
    Expr solved = Expr::constant(-coef.inverse()) * rest;
    int dim = std::max(d.to_expr().min_dim(), g.min_dim());
    std::vector<Expr> subs;
    for (int i = 0; i < dim; ++i) subs.push_back(i == var ? solved : Expr::var(i));
    return is_zero_nf(compose(d.to_expr(), subs));
  }

  bool cases_smooth(const Expr& e, int depth) {
    if (depth > kMaxDepth) return false;
    const Expr& g = e.arg(0);
    int s = sign(g, false);
    if (s != 0) {
      const Expr& br = s > 0 ? e.arg(3) : e.arg(1);
      if (!smooth(br, depth + 1)) return false;
      note("cases: guard " + brief(g) + " has sign " + (s > 0 ? "+" : "-") + " on the region");
      return true;
    }
    int s0 = sign(g, true);
    bool need_neg = s0 <= 0;
    bool need_pos = s0 >= 0;
    std::size_t mark = trace.size();
    Split a = split_branch(e.arg(1), g, depth + 1);
    Split c = split_branch(e.arg(3), g, depth + 1);
    if (need_neg && need_pos && !(a.plain - c.plain).is_zero()) {
      trace.resize(mark);
      return false;
    }
    const Poly& common = need_pos ? c.plain : a.plain;
    Expr common_e = common.to_expr();
    if (!smooth(common_e, depth + 1)) {
      trace.resize(mark);
      return false;
    }
    Poly db = to_poly(e.arg(2)) - common;
    if (!vanishes_on(db, g, depth + 1)) {
      trace.resize(mark);
      return false;
    }
    note("R3: cases on " + brief(g) + " joins flatly (common part " + brief(common_e) + ")");
    return true;
  }

  Box region_;
  std::unordered_map<std::string, bool> memo_;
};

// ---------------------------------------------------------------------------
// witness search

void collect_guards(const Expr& e, std::vector<Expr>& out, std::set<std::string>& seen) {
  for (const Expr& c : e.args()) collect_guards(c, out, seen);
  std::optional<Expr> g;
  switch (e.kind()) {
    case Kind::Abs:
    case Kind::Recip: g = e.arg(0); break;
    case Kind::Cases: g = e.arg(0); break;
    case Kind::Norm: g = e; break;
    default: break;
  }
  if (g && !g->is_const() && seen.insert(g->str()).second) out.push_back(*g);
}

Scalar nice_rational(double x) {
  // nearest multiple of 1/64, which keeps witness points short
  return Scalar(Rational(static_cast<long>(std::llround(x * 64)), 64));
}

std::vector<Scalar> center_of(const Box& b) {
  std::vector<Scalar> c;
  for (int i = 0; i < b.dim(); ++i) {
    double lo = b.lo[static_cast<std::size_t>(i)], hi = b.hi[static_cast<std::size_t>(i)];
    double v = 0;
    if (std::isfinite(lo) && std::isfinite(hi))
      v = 0.5 * (lo + hi);
    else if (std::isfinite(lo))
      v = std::max(0.0, lo + 1);
    else if (std::isfinite(hi))
      v = std::min(0.0, hi - 1);
    c.push_back(nice_rational(v));
  }
  return c;
}

bool inside(const Box& b, const std::vector<Scalar>& p) {
  auto d = to_doubles(p);
  return b.contains(d);
}

// roots of a univariate restriction; exact when it is a polynomial of
// degree <= 2 with roots in Q(sqrt2)
void line_roots(const Expr& r, std::vector<std::pair<Scalar, bool>>& out) {
  Poly p = to_poly(r);
  bool univariate_poly = true;
  int deg = 0;
  Scalar c[3] = {Scalar(0), Scalar(0), Scalar(0)};
  for (const auto& [m, k] : p.terms()) {
    if (m.empty()) {
      c[0] = k;
      continue;
    }
    if (m.size() != 1 || m[0].first.rank != 0 || m[0].first.var != 0 || m[0].second > 2) {
      univariate_poly = false;
      break;
    }
    deg = std::max(deg, static_cast<int>(m[0].second));
    c[m[0].second] = k;
  }
  if (univariate_poly && deg == 1) {
    out.emplace_back(-(c[0] / c[1]), true);
    return;
  }
  if (univariate_poly && deg == 2) {
    Scalar disc = c[1] * c[1] - Scalar(4) * c[2] * c[0];
    if (disc.sign() < 0) return;
    if (auto sq = exact_sqrt(disc)) {
      Scalar inv = (Scalar(2) * c[2]).inverse();
      out.emplace_back((-c[1] + *sq) * inv, true);
      if (!sq->is_zero()) out.emplace_back((-c[1] - *sq) * inv, true);
      return;
    }
  }
  if (univariate_poly && deg == 0) return;
  // numeric: sign changes on a grid, then bisection
  auto f = [&r](double s, double& v) {
    try {
      double x[1] = {s};
      v = evaluate(r, x);
      return true;
    } catch (const EvalError&) {
      return false;
    }
  };
  double prev_s = -4, prev_v = 0;
  bool have_prev = f(prev_s, prev_v);
  for (int i = 1; i <= 80; ++i) {
    double s = -4 + 0.1 * i, v = 0;
    bool ok = f(s, v);
    if (ok && v == 0.0) out.emplace_back(Scalar(Rational(s)), false);
    if (ok && have_prev && (prev_v < 0) != (v < 0) && prev_v != 0 && v != 0) {
      double lo = prev_s, hi = s, vlo = prev_v;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi), vm = 0;
        if (!f(mid, vm)) break;
        if ((vm < 0) == (vlo < 0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      out.emplace_back(Scalar(Rational(0.5 * (lo + hi))), false);
    }
    prev_s = s;
    prev_v = v;
    have_prev = ok;
  }
}

}  // namespace

std::vector<LocusPoint> guard_locus_points(const Expr& e, const Box& region) {
  std::vector<Expr> guards;
  std::set<std::string> seen;
  collect_guards(e, guards, seen);
  if (guards.size() > 8) guards.resize(8);
  int n = std::max(region.dim(), e.min_dim());
  Box box = region;
  while (box.dim() < n) {
    box.lo.push_back(-INFINITY);
    box.hi.push_back(INFINITY);
  }
  std::vector<Scalar> center = center_of(box);

  std::vector<std::pair<std::vector<Scalar>, std::vector<Scalar>>> lines;
  for (int i = 0; i < n; ++i) {
    std::vector<Scalar> d(static_cast<std::size_t>(n), Scalar(0));
    d[static_cast<std::size_t>(i)] = Scalar(1);
    lines.emplace_back(center, d);
  }
  std::mt19937_64 rng(0x51ab1e5eedULL);
  for (int k = 0; k < 6; ++k) {
    std::vector<Scalar> b = center, d;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      long off = static_cast<long>(rng() % 33) - 16;  // [-2, 2] in steps of 1/8
      b[static_cast<std::size_t>(i)] += Scalar(Rational(off, 8));
      long di = static_cast<long>(rng() % 7) - 3;
      nonzero = nonzero || di != 0;
      d.push_back(Scalar(di));
    }
    if (!nonzero) d[0] = Scalar(1);
    if (!inside(box, b)) b = center;
    lines.emplace_back(b, d);
  }

  std::vector<LocusPoint> out;
  std::set<std::string> keys;
  for (const Expr& g : guards) {
    for (const auto& [base, dir] : lines) {
      std::vector<std::pair<Scalar, bool>> roots;
      try {
        line_roots(restrict_to_line(g, base, dir), roots);
      } catch (const std::exception&) {
        continue;
      }
      for (const auto& [s, exact] : roots) {
        LocusPoint lp;
        for (std::size_t i = 0; i < base.size(); ++i) lp.point.push_back(base[i] + s * dir[i]);
        lp.direction = dir;
        lp.exact = exact;
        if (!inside(box, lp.point)) continue;
        std::string key;
        for (const Scalar& v : lp.point) key += v.str() + ",";
        for (const Scalar& v : lp.direction) key += v.str() + ";";
        if (!keys.insert(key).second) continue;
        out.push_back(std::move(lp));
        if (out.size() >= 48) return out;
      }
    }
  }
  return out;
}

namespace {

std::optional<Scalar> exact_value(const Expr& e, std::span<const Scalar> p) {
  try {
    return evaluate_exact(e, p);
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<JetMismatch> jet_mismatch(const Expr& e, std::span<const Scalar> point,
                                        std::span<const Scalar> dir, int order) {
  // restricting first lets guards that vanish on the whole line fold away
  Expr h = restrict_to_line(e, point, dir);
  const Scalar origin[1] = {Scalar(0)}, unit[1] = {Scalar(1)};
  auto l = one_sided_series(h, origin, unit, -1, order);
  auto r = one_sided_series(h, origin, unit, 1, order);
  if (!l || !r) return std::nullopt;
  auto dl = series_derivatives(*l);
  auto dr = series_derivatives(*r);
  JetMismatch jm;
  jm.value = exact_value(e, point);
  for (int j = 0; j <= order; ++j) {
    auto k = static_cast<std::size_t>(j);
    bool differ = !(dl[k] == dr[k]);
    if (j == 0 && jm.value && (!(*jm.value == dl[0]) || !(*jm.value == dr[0]))) differ = true;
    if (differ) {
      jm.order = j;
      jm.left.assign(dl.begin(), dl.begin() + j + 1);
      jm.right.assign(dr.begin(), dr.begin() + j + 1);
      return jm;
    }
  }
  jm.order = -1;
  jm.left = dl;
  jm.right = dr;
  return jm;
}

bool certified_smooth_quick(const Expr& e, const Box& region) {
  Certifier c(region);
  return c.smooth(e);
}

SmoothnessVerdict certify_smooth(const Expr& e, const Box& region) {
  SmoothnessVerdict v;
  Certifier c(region);
  if (c.smooth(e)) {
    v.status = SmoothStatus::Smooth;
    v.trace = std::move(c.trace);
    if (v.trace.empty()) v.trace.push_back("R1: " + brief(e));
    return v;
  }
  for (const LocusPoint& lp : guard_locus_points(e, region)) {
    if (lp.exact) {
      auto jm = jet_mismatch(e, lp.point, lp.direction, kJetOrder);
      if (jm && jm->order >= 0) {
        v.status = SmoothStatus::NotCk;
        v.point = lp.point;
        v.direction = lp.direction;
        v.order = jm->order;
        DivergenceRecord rec = probe_order(e, lp.point, lp.direction, jm->order);
        if (rec.divergent) v.divergence = rec;
        v.jets = std::move(jm);
        v.reason = "one-sided derivatives of order " + std::to_string(v.order) + " differ";
        return v;
      }
      if (jm) continue;  // jets agree to the probe order; look elsewhere
    }
    if (auto rec = first_divergence(e, lp.point, lp.direction)) {
      v.status = SmoothStatus::NotCk;
      v.point = lp.point;
      v.direction = lp.direction;
      v.order = rec->order;
      v.divergence = rec;
      v.reason = "finite differences of order " + std::to_string(v.order) + " diverge";
      return v;
    }
  }
  v.status = SmoothStatus::Unknown;
  v.reason = "no certification rule applies and no witness was found";
  return v;
}

SmoothnessVerdict certify_smooth(const Expr& e, int dim) {
  return certify_smooth(e, Box::all(std::max(dim, e.min_dim())));
}

bool recheck_not_ck(const Expr& e, const SmoothnessVerdict& v) {
  if (!v.not_ck()) return false;
  if (v.jets) {
    auto jm = jet_mismatch(e, v.point, v.direction, v.jets->order);
    return jm && jm->order == v.jets->order && jm->left == v.jets->left &&
           jm->right == v.jets->right;
  }
  return v.divergence && recheck_divergence(e, *v.divergence);
}

CkVerdict ck_regularity(const Expr& e, int k, const Scalar& point) {
  CkVerdict out;
  if (k < 0) {
    out.reason = "negative order";
    return out;
  }
  std::vector<Scalar> p{point}, d{Scalar(1)};
  auto jm = jet_mismatch(e, p, d, k + 1);
  if (!jm) {
    out.reason = "no exact one-sided expansion at the point";
    return out;
  }
  out.mismatch_order = jm->order;
  out.left = jm->left;
  out.right = jm->right;
  out.value = jm->value;
  if (jm->order < 0) {
    out.result = Outcome::No;
    out.reason = "one-sided jets agree to order " + std::to_string(k + 1);
  } else if (jm->order <= k) {
    out.result = Outcome::No;
    out.reason = "one-sided derivatives of order " + std::to_string(jm->order) + " differ";
  } else {
    out.result = Outcome::Yes;
    out.reason = "jets agree to order " + std::to_string(k) + ", differ at order " +
                 std::to_string(k + 1);
  }
  out.divergence = probe_order(e, p, d, k + 1);
  return out;
}

}  // namespace smoothkit
