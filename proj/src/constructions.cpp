#include "smoothkit/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smoothkit/jets.hpp"
#include "smoothkit/normal_form.hpp"

namespace smoothkit {

// ---------------------------------------------------------------------------
// quotients

SpacePresentation QuotientPresentation::presentation() const {
  SpacePresentation p;
  p.construction = "quotient";
  p.fn_generators = fn_generators;
  p.plot_generators = plot_generators;
  switch (kind) {
    case Identification::Group:
      p.label = base.label + " / G";
      p.carrier.kind = CarrierKind::QuotientByGroup;
      p.carrier.dim = base.dim();
      p.carrier.inner = std::make_shared<Carrier>(base.carrier);
      p.carrier.group = group;
      break;
    case Identification::Flow:
      p.label = "T_" + slope.str();
      p.carrier.kind = CarrierKind::QuotientByFlow;
      p.carrier.dim = 2;
      p.carrier.slope = slope;
      break;
    case Identification::Gluing:
      p.label = base.label;
      p.carrier = base.carrier;
      break;
  }
  return p;
}

namespace {

void require_euclidean(const SpacePresentation& x, int dim) {
  if (x.carrier.kind != CarrierKind::Euclidean || x.dim() != dim)
    throw std::invalid_argument("the base of this quotient must be R^" + std::to_string(dim));
}

}  // namespace

QuotientPresentation quotient_differential(const SpacePresentation& x, const FiniteMatrixGroup& g,
                                           int degree, std::vector<Expr> supplied) {
  require_euclidean(x, g.dim());
  QuotientPresentation q;
  q.base = x;
  q.kind = Identification::Group;
  q.group = g;
  q.degree_bound = degree;
  if (supplied.empty()) {
    HilbertMap h = hilbert_map(g, degree);
    q.fn_generators = h.generators;
    q.note = h.note();
  } else {
    for (std::size_t i = 0; i < supplied.size(); ++i)
      if (!is_invariant(supplied[i], g))
        throw std::invalid_argument("generator " + std::to_string(i) + " (" + supplied[i].str() +
                                    ") is not invariant");
    q.fn_generators = std::move(supplied);
    q.note = "supplied invariant generators";
  }
  q.plot_generators = x.plot_generators;
  return q;
}

QuotientPresentation quotient_differential_flow(const SpacePresentation& x, const Scalar& slope) {
  require_euclidean(x, 2);
  if (slope.is_rational()) throw std::invalid_argument("flow slope must be irrational");
  QuotientPresentation q;
  q.base = x;
  q.kind = Identification::Flow;
  q.slope = slope;
  q.note = "only constants are flow invariant (checked on the truncated Fourier class)";
  q.plot_generators = x.plot_generators;
  return q;
}

QuotientPresentation quotient_diffeology(const SpacePresentation& x, const FiniteMatrixGroup& g) {
  require_euclidean(x, g.dim());
  QuotientPresentation q;
  q.base = x;
  q.kind = Identification::Group;
  q.group = g;
  q.plot_generators = x.plot_generators;
  q.note = "plots pi o base plots; membership by local lifts";
  return q;
}

QuotientPresentation quotient_diffeology_flow(const SpacePresentation& x, const Scalar& slope) {
  QuotientPresentation q = quotient_differential_flow(x, slope);
  q.note = "plots pi o base plots; membership by local lifts";
  return q;
}

QuotientPresentation wedge_quotient(const std::vector<int>& dims) {
  if (dims.size() < 2) throw std::invalid_argument("a wedge needs two pieces");
  QuotientPresentation q;
  q.kind = Identification::Gluing;
  Carrier c;
  c.kind = CarrierKind::Wedge;
  c.dim = 0;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("wedge pieces need dimension >= 1");
    c.pieces.push_back(Carrier::euclidean(d));
    c.basepoints.emplace_back(static_cast<std::size_t>(d), Scalar(0));
    c.dim += d;
  }
  int off = 0;
  for (int d : dims) {
    std::vector<Expr> comps(static_cast<std::size_t>(c.dim), Expr());
    for (int j = 0; j < d; ++j) comps[static_cast<std::size_t>(off + j)] = Expr::var(j);
    q.plot_generators.push_back(PlotGen::make(std::move(comps), d));
    off += d;
  }
  q.base.label = "wedge of " + std::to_string(dims.size()) + " pieces at their origins";
  q.base.carrier = c;
  q.base.plot_generators = q.plot_generators;
  q.note = "pieces glued at their origins; plots pi o I_i";
  return q;
}

bool flow_invariant(const Expr& f, const Scalar& slope) {
  Expr d = differentiate(f, 0).expr + Expr::constant(slope) * differentiate(f, 1).expr;
  return is_zero_nf(d);
}

// ---------------------------------------------------------------------------
// subsets

namespace {

SpacePresentation induced(const SpacePresentation& x, const Carrier& y, const char* what) {
  if (x.carrier.kind != CarrierKind::Euclidean)
    throw std::invalid_argument("subset structures are induced from a Euclidean ambient space");
  if (x.dim() != y.dim) throw std::invalid_argument("subset and ambient dimensions differ");
  SpacePresentation s;
  s.label = std::string(what) + " on a subset of " + x.label;
  s.carrier = y;
  s.fn_generators = x.fn_generators;
  s.plot_generators = y.parametrizations;
  s.construction = "subset";
  return s;
}

}  // namespace

SpacePresentation subset_differential(const SpacePresentation& x, const Carrier& y) {
  return induced(x, y, "subset differential structure");
}

SpacePresentation subset_diffeology(const SpacePresentation& x, const Carrier& y) {
  return induced(x, y, "subset diffeology");
}

std::vector<Expr> square_map(int n) {
  std::vector<Expr> sq;
  for (int i = 0; i < n; ++i) sq.push_back(Expr::pow(Expr::var(i), 2));
  return sq;
}

namespace {

Verdict orthant_verdict(const Expr& f, const Expr& pulled, int n, const std::string& note) {
  SmoothnessVerdict v = certify_smooth(pulled, n);
  if (v.smooth())
    return Verdict::yes({"f o sq certified smooth (" + v.trace.front() + ")",
                         "even functions of the x_i are smooth functions of the x_i^2 (Whitney)"});
  if (v.not_ck()) {
    CompositionNotSmooth w{f, PlotGen::make(square_map(n), n), pulled, v, note};
    return Verdict::no(std::move(w), "f o sq is not smooth, and sq is a plot of the orthant");
  }
  return Verdict::unknown("f o sq: " + v.reason);
}

}  // namespace

Verdict orthant_membership(const Expr& f, int n) {
  if (n < 1) throw std::invalid_argument("orthant dimension must be >= 1");
  return orthant_verdict(f, compose(f, square_map(n)), n, "");
}

Verdict orthant_membership_pullback(const Expr& g, int n) {
  if (n < 1) throw std::invalid_argument("orthant dimension must be >= 1");
  if (!is_invariant(g, FiniteMatrixGroup::sign_flips(n)))
    throw std::invalid_argument("pullback along sq must be invariant under sign flips");
  return orthant_verdict(g, g, n, "function given by its pullback along sq");
}

// ---------------------------------------------------------------------------
// lifts

namespace {

using Vec = std::vector<double>;

double dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double norm2(const Vec& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

Vec act(const Matrix& g, const Vec& x) {
  Vec y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += g[i][j].to_double() * x[j];
  return y;
}

// Gauss-Newton with backtracking on |h(x) - y|^2
struct Solver {
  std::vector<Expr> h;
  std::vector<std::vector<Expr>> dh;  // dh[i][j] = d h_i / d x_j
  int n = 0;

  Solver(const std::vector<Expr>& gens, int dim) : h(gens), n(dim) {
    for (const Expr& g : gens) {
      std::vector<Expr> row;
      for (int j = 0; j < n; ++j) row.push_back(differentiate(g, j).expr);
      dh.push_back(std::move(row));
    }
  }

  Vec residual(const Vec& x, const Vec& y) const {
    Vec r;
    for (std::size_t i = 0; i < h.size(); ++i) r.push_back(evaluate(h[i], x) - y[i]);
    return r;
  }

  Vec solve(Vec x, const Vec& y) const {
    auto un = static_cast<std::size_t>(n);
    for (int it = 0; it < 100; ++it) {
      Vec r = residual(x, y);
      double rn = norm2(r);
      if (rn == 0) break;
      // normal equations J^T J dx = -J^T r, lightly damped
      std::vector<Vec> a(un, Vec(un, 0.0));
      Vec b(un, 0.0);
      for (std::size_t i = 0; i < h.size(); ++i) {
        Vec row;
        for (std::size_t j = 0; j < un; ++j) row.push_back(evaluate(dh[i][j], x));
        for (std::size_t j = 0; j < un; ++j) {
          b[j] -= row[j] * r[i];
          for (std::size_t k = 0; k < un; ++k) a[j][k] += row[j] * row[k];
        }
      }
      double tr = 0;
      for (std::size_t j = 0; j < un; ++j) tr += a[j][j];
      for (std::size_t j = 0; j < un; ++j) a[j][j] += 1e-12 * tr + 1e-300;
      // Gaussian elimination
      for (std::size_t c = 0; c < un; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < un; ++i)
          if (std::fabs(a[i][c]) > std::fabs(a[p][c])) p = i;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        if (a[c][c] == 0) return x;
        for (std::size_t i = c + 1; i < un; ++i) {
          double f = a[i][c] / a[c][c];
          for (std::size_t k = c; k < un; ++k) a[i][k] -= f * a[c][k];
          b[i] -= f * b[c];
        }
      }
      Vec dx(un, 0.0);
      for (std::size_t c = un; c-- > 0;) {
        double s = b[c];
        for (std::size_t k = c + 1; k < un; ++k) s -= a[c][k] * dx[k];
        dx[c] = s / a[c][c];
      }
      double step = 1;
      Vec next;
      for (int bt = 0; bt < 40; ++bt, step /= 2) {
        next = x;
        for (std::size_t j = 0; j < un; ++j) next[j] += step * dx[j];
        if (norm2(residual(next, y)) < rn) break;
      }
      if (norm2(residual(next, y)) >= rn) break;
      x = std::move(next);
    }
    return x;
  }
};

}  // namespace

LiftResult lift_witness(const PlotGen& p, const FiniteMatrixGroup& g,
                        const std::vector<Expr>& invariants, const std::vector<Scalar>& center,
                        const Scalar& radius, int samples) {
  LiftResult out;
  if (p.dims() != 2 || center.size() != 2) {
    out.reason = "the loop test needs a plot with a 2-dimensional domain";
    return out;
  }
  if (p.components.size() != invariants.size()) {
    out.reason = "plot is not written in the given invariant coordinates";
    return out;
  }
  if (samples < 8 || radius.sign() <= 0) {
    out.reason = "bad loop parameters";
    return out;
  }
  const int n = g.dim();
  Solver solver(invariants, n);
  double r = radius.to_double();
  double cx = center[0].to_double(), cy = center[1].to_double();
  auto value = [&](int k) {
    double th = 2 * std::numbers::pi * k / samples;
    Vec u{cx + r * std::cos(th), cy + r * std::sin(th)};
    Vec y;
    for (const Expr& c : p.components) y.push_back(evaluate(c, u));
    return y;
  };
  auto fits = [&](const Vec& x, const Vec& y) {
    double scale = 0;
    for (double v : y) scale = std::max(scale, std::fabs(v));
    return norm2(solver.residual(x, y)) <= 1e-10 * scale + 1e-300;
  };

  // first representative: multi-start
  Vec y0 = value(0);
  double s = 0;
  for (double v : y0) s = std::max(s, std::fabs(v));
  s = std::sqrt(s);
  std::vector<Vec> starts;
  for (int i = 0; i < n; ++i) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = s;
    starts.push_back(e);
    for (int j = i + 1; j < n; ++j) {
      Vec f = e, h = e;
      f[static_cast<std::size_t>(j)] = s;
      h[static_cast<std::size_t>(j)] = -s;
      starts.push_back(f);
      starts.push_back(h);
    }
  }
  std::optional<Vec> x0;
  for (const Vec& st : starts) {
    Vec x = solver.solve(st, y0);
    if (fits(x, y0)) {
      x0 = x;
      break;
    }
  }
  if (!x0) {
    out.reason = "no representative found at the start of the loop";
    return out;
  }

  const auto& els = g.elements();
  std::size_t id = 0;
  for (std::size_t i = 0; i < els.size(); ++i)
    if (is_identity(els[i])) id = i;

  auto separation_at = [&](const Vec& x) {
    double m = INFINITY;
    for (std::size_t i = 0; i < els.size(); ++i)
      if (i != id) m = std::min(m, dist(act(els[i], x), x));
    return m;
  };

  Vec prev = *x0;
  double max_step = 0, sep = separation_at(prev);
  for (int k = 1; k <= samples; ++k) {
    Vec y = value(k);
    Vec x = solver.solve(prev, y);
    if (!fits(x, y)) {
      out.reason = "representative lost at loop sample " + std::to_string(k);
      return out;
    }
    // nearest orbit point
    Vec best = x;
    double bd = INFINITY;
    for (const Matrix& m : els) {
      Vec gx = act(m, x);
      double d = dist(gx, prev);
      if (d < bd) {
        bd = d;
        best = gx;
      }
    }
    max_step = std::max(max_step, bd);
    sep = std::min(sep, separation_at(best));
    prev = std::move(best);
  }
  // which element carries the start to the end
  std::size_t hol = id;
  double bd = INFINITY;
  for (std::size_t i = 0; i < els.size(); ++i) {
    double d = dist(act(els[i], *x0), prev);
    if (d < bd) {
      bd = d;
      hol = i;
    }
  }
  if (!(max_step < sep / 2) || !(bd < sep / 2)) {
    out.reason = "tracking is not separated from the other branches (step " +
                 std::to_string(max_step) + ", separation " + std::to_string(sep) + ")";
    return out;
  }
  if (hol == id) {
    out.reason = "the tracked representative closes up; no monodromy";
    return out;
  }
  NoContinuousLift w;
  w.model = NoContinuousLift::Model::Loop;
  w.plot = p;
  w.group = g;
  w.invariants = invariants;
  w.center = center;
  w.radius = radius;
  w.samples = samples;
  w.holonomy = static_cast<int>(hol);
  w.separation = sep;
  w.max_step = max_step;
  out.witness = std::move(w);
  out.reason = "the representative returns moved by a non-identity element";
  return out;
}

namespace {

std::optional<int> side_sign(const Expr& g, const Scalar& t0, int side) {
  std::vector<Scalar> p{t0}, d{Scalar(1)};
  auto s = one_sided_series(g, p, d, side, 8);
  if (!s) return std::nullopt;
  for (std::size_t j = 0; j < s->size(); ++j)
    if (!(*s)[j].is_zero()) return (*s)[j].sign() * (side < 0 && j % 2 == 1 ? -1 : 1);
  return std::nullopt;
}

}  // namespace

std::optional<Expr> resolve_side(const Expr& e, const Scalar& t0, int side) {
  std::vector<Expr> args;
  for (const Expr& a : e.args()) {
    auto r = resolve_side(a, t0, side);
    if (!r) return std::nullopt;
    args.push_back(*r);
  }
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Var: return e;
    case Kind::Sum: return Expr::sum(args);
    case Kind::Product: return Expr::product(args);
    case Kind::IntPow: return Expr::pow(args[0], e.exponent());
    case Kind::Sin: return Expr::sin(args[0]);
    case Kind::Cos: return Expr::cos(args[0]);
    case Kind::Flat: return Expr::flat(args[0]);
    case Kind::Recip: return Expr::recip(args[0]);
    case Kind::Norm: return Expr::norm(args);
    case Kind::Abs: {
      auto s = side_sign(args[0], t0, side);
      if (!s) return std::nullopt;
      return *s > 0 ? args[0] : -args[0];
    }
    case Kind::Cases: {
      auto s = side_sign(args[0], t0, side);
      if (!s) return std::nullopt;
      return *s > 0 ? args[3] : args[1];
    }
  }
  return std::nullopt;
}

namespace {

// e has no zeros on a punctured one-sided neighbourhood of t0
bool nonvanishing_near(const Expr& e, const Scalar& t0, int side) {
  switch (e.kind()) {
    case Kind::Const: return !e.value().is_zero();
    case Kind::Flat: return nonvanishing_near(e.arg(0), t0, side);
    case Kind::IntPow: return nonvanishing_near(e.arg(0), t0, side);
    case Kind::Product:
      return std::all_of(e.args().begin(), e.args().end(),
                         [&](const Expr& a) { return nonvanishing_near(a, t0, side); });
    default: break;
  }
  return side_sign(e, t0, side).has_value();
}

}  // namespace

LiftResult lift_witness_wedge(const PlotGen& p, const std::vector<int>& blocks, const Scalar& t0) {
  LiftResult out;
  int total = 0;
  for (int b : blocks) total += b;
  if (p.dims() != 1 || p.target_dim() != total) {
    out.reason = "needs a curve in the block model of the wedge";
    return out;
  }
  std::vector<Scalar> at{t0};
  for (const Expr& c : p.components) {
    std::optional<Scalar> v;
    try {
      v = evaluate_exact(c, at);
    } catch (const EvalError&) {
    }
    bool zero = v ? v->is_zero() : evaluate(c, to_doubles(at)) == 0.0;
    if (!zero) {
      out.reason = "the curve is not at the basepoint at t0";
      return out;
    }
  }
  int piece[2] = {-1, -1};
  for (int si = 0; si < 2; ++si) {
    int side = si == 0 ? -1 : 1;
    std::vector<int> live;
    std::size_t off = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      bool nz = false, zero = true;
      for (int j = 0; j < blocks[b]; ++j) {
        auto r = resolve_side(p.components[off + static_cast<std::size_t>(j)], t0, side);
        if (!r) {
          out.reason = "branch selection near t0 is undecided";
          return out;
        }
        if (!is_zero_nf(*r)) zero = false;
        if (nonvanishing_near(*r, t0, side)) nz = true;
      }
      if (nz) live.push_back(static_cast<int>(b));
      else if (!zero) {
        out.reason = "could not decide which piece the curve occupies";
        return out;
      }
      off += static_cast<std::size_t>(blocks[b]);
    }
    if (live.size() != 1) {
      out.reason = "the curve does not occupy a single piece on one side of t0";
      return out;
    }
    piece[si] = live[0];
  }
  if (piece[0] == piece[1]) {
    out.reason = "both sides of t0 stay in the same piece";
    return out;
  }
  NoContinuousLift w;
  w.model = NoContinuousLift::Model::Branches;
  w.plot = p;
  w.blocks = blocks;
  w.t0 = t0;
  for (int k = 1; k <= 4; ++k)
    for (int side : {-1, 1}) {
      Scalar t = t0 + Scalar(Rational(side, 1L << k));
      std::vector<double> x{t.to_double()};
      int hit = -1;
      std::size_t off = 0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int j = 0; j < blocks[b]; ++j)
          if (evaluate(p.components[off + static_cast<std::size_t>(j)], x) != 0.0) hit = static_cast<int>(b);
        off += static_cast<std::size_t>(blocks[b]);
      }
      w.params.push_back(t);
      w.pieces.push_back(hit);
    }
  out.witness = std::move(w);
  out.reason = "left of t0 the curve is in piece " + std::to_string(piece[0]) + ", right of it in piece " +
               std::to_string(piece[1]) + ", both off the basepoint";
  return out;
}

bool recheck_lift(const NoContinuousLift& w) {
  if (w.model == NoContinuousLift::Model::Loop) {
    auto again = lift_witness(w.plot, w.group, w.invariants, w.center, w.radius, w.samples);
    return again.witness && again.witness->holonomy == w.holonomy &&
           std::fabs(again.witness->separation - w.separation) <= 1e-9 * w.separation;
  }
  auto again = lift_witness_wedge(w.plot, w.blocks, w.t0);
  return again.witness && again.witness->pieces == w.pieces;
}

// ---------------------------------------------------------------------------
// the irrational torus

std::optional<TopologyObstruction> step_obstruction(const PlotGen& p, const Scalar& slope) {
  if (p.dims() != 1 || p.target_dim() != 2 || p.orbit_coords) return std::nullopt;
  Box box = p.domain.box();
  for (const Expr& c : p.components)
    for (const LocusPoint& lp : guard_locus_points(c, box)) {
      if (!lp.exact) continue;
      TopologyObstruction w;
      w.plot = p;
      w.point = lp.point;
      w.direction = lp.direction;
      w.slope = slope;
      w.description = "one-sided limits differ by (dx, dy) with dy - slope*dx outside Z + slope*Z";
      if (!recheck_step(w)) continue;
      // fill in the data recheck_step derived
      for (const Expr& comp : p.components) {
        auto l = one_sided_series(comp, lp.point, lp.direction, -1, 0);
        auto r = one_sided_series(comp, lp.point, lp.direction, 1, 0);
        w.left.push_back((*l)[0]);
        w.right.push_back((*r)[0]);
      }
      w.invariant = (w.right[1] - w.left[1]) - slope * (w.right[0] - w.left[0]);
      return w;
    }
  return std::nullopt;
}

bool recheck_step(const TopologyObstruction& w) {
  if (w.slope.is_rational()) return false;
  std::vector<Scalar> left, right;
  for (const Expr& comp : w.plot.components) {
    // each side must be continuous up to the point: an exact expansion there
    auto l = one_sided_series(comp, w.point, w.direction, -1, 1);
    auto r = one_sided_series(comp, w.point, w.direction, 1, 1);
    if (!l || !r) return false;
    left.push_back((*l)[0]);
    right.push_back((*r)[0]);
  }
  for (const Expr& comp : w.plot.components)
    for (int side : {-1, 1}) {
      auto b = resolve_side(restrict_to_line(comp, w.point, w.direction), Scalar(0), side);
      if (!b || !b->is_r1_class()) return false;
    }
  Scalar q = (right[1] - left[1]) - w.slope * (right[0] - left[0]);
  if (!w.left.empty() && (w.left != left || w.right != right || !(w.invariant == q))) return false;
  return !in_integer_lattice(q, w.slope);
}

TorusReport torus_invariants(const Scalar& alpha, int n) {
  if (n < 1) throw std::invalid_argument("Fourier degree bound must be >= 1");
  if (alpha.is_rational()) throw std::invalid_argument("flow slope must be irrational");
  TorusReport r;
  r.degree = n;
  r.basis_size = 1;
  r.dimension = 1;  // the constant function
  // frequencies up to sign: m > 0, or m = 0 and n > 0; the flow derivative
  // acts on span{cos, sin} of 2 pi (m x + n y) by the block
  // 2 pi (m + alpha n) [[0, -1], [1, 0]]
  for (int m = 0; m <= n; ++m)
    for (int k = -n; k <= n; ++k) {
      if (m == 0 && k <= 0) continue;
      Scalar w = Scalar(m) + alpha * Scalar(k);
      Matrix block{{Scalar(0), -w}, {w, Scalar(0)}};
      r.basis_size += 2;
      r.dimension += 2 - static_cast<int>(rank(block));
    }
  r.note = "verified on truncated Fourier class";
  return r;
}

// ---------------------------------------------------------------------------

std::optional<Expr> express_in_generators(const Expr& f, const std::vector<Expr>& gens, int n) {
  if (!f.is_polynomial()) return std::nullopt;
  for (const Expr& g : gens)
    if (!g.is_polynomial()) return std::nullopt;
  Coeffs target = expand_polynomial(f, n);
  auto degree = [](const Coeffs& c, bool low) {
    unsigned best = low ? ~0u : 0u;
    for (const auto& [ex, v] : c) {
      unsigned d = 0;
      for (unsigned e : ex) d += e;
      best = low ? std::min(best, d) : std::max(best, d);
    }
    return best;
  };
  unsigned top = target.empty() ? 0 : degree(target, false);
  std::vector<Coeffs> gc;
  std::vector<unsigned> gdeg;
  for (const Expr& g : gens) {
    gc.push_back(expand_polynomial(g, n));
    if (gc.back().empty()) return std::nullopt;
    gdeg.push_back(degree(gc.back(), true));
    if (gdeg.back() == 0) return std::nullopt;
  }
  // products of generators with low degree <= top
  std::vector<std::vector<unsigned>> exps{{}};
  exps[0].assign(gens.size(), 0u);
  std::vector<Coeffs> prods{Coeffs{{Exponents(static_cast<std::size_t>(n), 0u), Scalar(1)}}};
  for (std::size_t i = 0; i < exps.size(); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      // extend only at or after the last nonzero index to avoid repeats
      bool ok = true;
      for (std::size_t h = g + 1; h < gens.size(); ++h) ok = ok && exps[i][h] == 0;
      if (!ok) continue;
      unsigned d = gdeg[g];
      for (std::size_t h = 0; h < gens.size(); ++h) d += exps[i][h] * gdeg[h];
      if (d > top) continue;
      auto e = exps[i];
      ++e[g];
      Coeffs prod;
      for (const auto& [ea, va] : prods[i])
        for (const auto& [eb, vb] : gc[g]) {
          Exponents s(ea);
          for (std::size_t k = 0; k < s.size(); ++k) s[k] += eb[k];
          prod[s] += va * vb;
        }
      exps.push_back(std::move(e));
      prods.push_back(std::move(prod));
    }
  std::vector<Exponents> rows;
  for (const auto& c : prods)
    for (const auto& [ex, v] : c)
      if (!v.is_zero() && std::find(rows.begin(), rows.end(), ex) == rows.end()) rows.push_back(ex);
  for (const auto& [ex, v] : target)
    if (std::find(rows.begin(), rows.end(), ex) == rows.end()) rows.push_back(ex);
  Matrix a = zeros(rows.size(), prods.size());
  std::vector<Scalar> b(rows.size(), Scalar(0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < prods.size(); ++c) {
      auto it = prods[c].find(rows[r]);
      if (it != prods[c].end()) a[r][c] = it->second;
    }
    auto it = target.find(rows[r]);
    if (it != target.end()) b[r] = it->second;
  }
  auto x = solve(a, b);
  if (!x) return std::nullopt;
  std::vector<Expr> terms;
  for (std::size_t c = 0; c < prods.size(); ++c) {
    if ((*x)[c].is_zero()) continue;
    std::vector<Expr> fs{Expr::constant((*x)[c])};
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (exps[c][g]) fs.push_back(Expr::pow(Expr::var(static_cast<int>(g)), exps[c][g]));
    terms.push_back(Expr::product(std::move(fs)));
  }
  return Expr::sum(std::move(terms));
}

PlotGen zadka_plot() {
  // invariant coordinates of [e^{-1/r^2} cos(th/2), e^{-1/r^2} sin(th/2)]:
  // e^{-2/r^2} (1 + cos th)/2, e^{-2/r^2} sin(th)/2, e^{-2/r^2} (1 - cos th)/2
  Expr x = Expr::var(0), y = Expr::var(1);
  Expr r = Expr::norm({x, y});
  Expr decay = Expr::pow(Expr::flat(r), 2) * Expr::recip(r) * Expr::constant(Scalar::ratio(1, 2));
  auto wrap = [&](const Expr& e) { return Expr::cases(r, Expr(), Expr(), decay * e); };
  PlotGen p = PlotGen::make({wrap(r + x), wrap(y), wrap(r - x)}, 2);
  p.orbit_coords = true;
  return p;
}

}  // namespace smoothkit
