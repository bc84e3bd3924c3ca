#include "smoothkit/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace smoothkit {

struct Node {
  Kind kind = Kind::Const;
  Scalar value;
  int index = 0;
  unsigned exponent = 0;
  std::vector<Expr> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
  int min_dim = 0;

  static Expr make(Kind k, std::vector<Expr> kids, Scalar value = {}, int index = 0,
                   unsigned exponent = 0) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->value = std::move(value);
    n->index = index;
    n->exponent = exponent;
    n->kids = std::move(kids);
    std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    if (k == Kind::Const) mix(n->value.hash());
    mix(static_cast<std::size_t>(index));
    mix(exponent);
    if (k == Kind::Var) n->min_dim = index + 1;
    for (const Expr& c : n->kids) {
      mix(c.hash());
      n->size += c.size();
      n->min_dim = std::max(n->min_dim, c.min_dim());
    }
    n->hash = h;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
  }
};

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Const: return "const";
    case Kind::Var: return "var";
    case Kind::Sum: return "sum";
    case Kind::Product: return "product";
    case Kind::IntPow: return "pow";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Flat: return "flat";
    case Kind::Abs: return "abs";
    case Kind::Cases: return "cases";
    case Kind::Recip: return "recip";
    case Kind::Norm: return "norm";
  }
  return "?";
}

Expr::Expr() : Expr(constant(Scalar(0))) {}

Kind Expr::kind() const { return node_->kind; }
const Scalar& Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
unsigned Expr::exponent() const { return node_->exponent; }
std::span<const Expr> Expr::args() const { return node_->kids; }
int Expr::min_dim() const { return node_->min_dim; }
std::size_t Expr::size() const { return node_->size; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::contains(Kind k) const {
  if (kind() == k) return true;
  return std::any_of(args().begin(), args().end(), [k](const Expr& c) { return c.contains(k); });
}

bool Expr::is_r1_class() const {
  switch (kind()) {
    case Kind::Abs:
    case Kind::Cases:
    case Kind::Recip:
    case Kind::Norm:
      return false;
    default:
      return std::all_of(args().begin(), args().end(),
                         [](const Expr& c) { return c.is_r1_class(); });
  }
}

bool Expr::is_polynomial() const {
  switch (kind()) {
    case Kind::Const:
    case Kind::Var:
    case Kind::Sum:
    case Kind::Product:
    case Kind::IntPow:
      return std::all_of(args().begin(), args().end(),
                         [](const Expr& c) { return c.is_polynomial(); });
    default:
      return false;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.index() != b.index() || a.exponent() != b.exponent()) return false;
  if (a.kind() == Kind::Const && !(a.value() == b.value())) return false;
  auto ka = a.args();
  auto kb = b.args();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (ka[i] != kb[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// smart constructors

Expr Expr::constant(Scalar c) { return Node::make(Kind::Const, {}, std::move(c)); }

Expr Expr::var(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  return Node::make(Kind::Var, {}, {}, index);
}

namespace {

// term = coef * rest, rest has no constant factor
std::pair<Scalar, Expr> split_coefficient(const Expr& e) {
  if (e.is_const()) return {e.value(), Expr::constant(Scalar(1))};
  if (e.kind() == Kind::Product && e.arg(0).is_const()) {
    std::vector<Expr> rest(e.args().begin() + 1, e.args().end());
    return {e.arg(0).value(), rest.size() == 1 ? rest[0] : Expr::product(std::move(rest))};
  }
  return {Scalar(1), e};
}

std::pair<Expr, unsigned> split_power(const Expr& e) {
  if (e.kind() == Kind::IntPow) return {e.arg(0), e.exponent()};
  return {e, 1u};
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum)
      flat.insert(flat.end(), t.args().begin(), t.args().end());
    else
      flat.push_back(std::move(t));
  }
  Scalar c(0);
  std::vector<std::pair<Scalar, Expr>> grouped;
  for (const Expr& t : flat) {
    if (t.is_const()) {
      c += t.value();
      continue;
    }
    auto [k, rest] = split_coefficient(t);
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&rest](const auto& g) { return g.second == rest; });
    if (it == grouped.end())
      grouped.emplace_back(k, rest);
    else
      it->first += k;
  }
  std::vector<Expr> out;
  for (auto& [k, rest] : grouped) {
    if (k.is_zero()) continue;
    out.push_back(k.is_one() ? rest : product({constant(k), rest}));
  }
  if (!c.is_zero()) out.push_back(constant(c));
  if (out.empty()) return constant(Scalar(0));
  if (out.size() == 1) return out[0];
  return Node::make(Kind::Sum, std::move(out));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  for (auto& f : factors) {
    if (f.kind() == Kind::Product)
      flat.insert(flat.end(), f.args().begin(), f.args().end());
    else
      flat.push_back(std::move(f));
  }
  Scalar c(1);
  std::vector<std::pair<Expr, unsigned>> grouped;
  for (const Expr& f : flat) {
    if (f.is_const()) {
      c *= f.value();
      continue;
    }
    auto [base, n] = split_power(f);
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&base](const auto& g) { return g.first == base; });
    if (it == grouped.end())
      grouped.emplace_back(base, n);
    else
      it->second += n;
  }
  if (c.is_zero()) return constant(Scalar(0));
  std::vector<Expr> out;
  if (!c.is_one()) out.push_back(constant(c));
  for (auto& [base, n] : grouped) out.push_back(pow(base, n));
  if (out.empty()) return constant(Scalar(1));
  if (out.size() == 1) return out[0];
  return Node::make(Kind::Product, std::move(out));
}

Expr Expr::pow(Expr base, unsigned n) {
  if (n == 0) return constant(Scalar(1));
  if (n == 1) return base;
  if (base.is_const()) return constant(base.value().pow(n));
  if (base.kind() == Kind::IntPow) return pow(base.arg(0), base.exponent() * n);
  return Node::make(Kind::IntPow, {std::move(base)}, {}, 0, n);
}

Expr Expr::sin(Expr u) {
  if (u.is_zero()) return constant(Scalar(0));
  return Node::make(Kind::Sin, {std::move(u)});
}

Expr Expr::cos(Expr u) {
  if (u.is_zero()) return constant(Scalar(1));
  return Node::make(Kind::Cos, {std::move(u)});
}

Expr Expr::flat(Expr u) {
  if (u.is_zero()) return constant(Scalar(0));
  return Node::make(Kind::Flat, {std::move(u)});
}

Expr Expr::abs(Expr u) {
  if (u.is_const()) return constant(u.value().sign() < 0 ? -u.value() : u.value());
  if (u.kind() == Kind::Abs || u.kind() == Kind::Norm || u.kind() == Kind::Flat) return u;
  return Node::make(Kind::Abs, {std::move(u)});
}

Expr Expr::recip(Expr u) {
  if (u.is_const() && !u.value().is_zero()) return constant(u.value().inverse());
  return Node::make(Kind::Recip, {std::move(u)});
}

Expr Expr::norm(std::vector<Expr> parts) {
  std::vector<Expr> kept;
  for (auto& p : parts)
    if (!p.is_zero()) kept.push_back(std::move(p));
  if (kept.empty()) return constant(Scalar(0));
  if (kept.size() == 1) return abs(kept[0]);
  return Node::make(Kind::Norm, std::move(kept));
}

namespace {

// Inside a branch where sign(guard) == s is known, resolve dependent nodes.
Expr resolve_sign(const Expr& e, const Expr& guard, int s) {
  if (e.is_const() || e.kind() == Kind::Var) return e;
  if (e.kind() == Kind::Cases && e.arg(0) == guard)
    return resolve_sign(s < 0 ? e.arg(1) : (s == 0 ? e.arg(2) : e.arg(3)), guard, s);
  if (e.kind() == Kind::Abs && e.arg(0) == guard)
    return s < 0 ? -guard : (s == 0 ? Expr::constant(Scalar(0)) : guard);
  if (e.kind() == Kind::Flat && e.arg(0) == guard && s == 0) return Expr::constant(Scalar(0));
  bool changed = false;
  std::vector<Expr> kids;
  kids.reserve(e.args().size());
  for (const Expr& c : e.args()) {
    kids.push_back(resolve_sign(c, guard, s));
    changed = changed || kids.back() != c;
  }
  if (!changed) return e;
  switch (e.kind()) {
    case Kind::Sum: return Expr::sum(std::move(kids));
    case Kind::Product: return Expr::product(std::move(kids));
    case Kind::IntPow: return Expr::pow(kids[0], e.exponent());
    case Kind::Sin: return Expr::sin(kids[0]);
    case Kind::Cos: return Expr::cos(kids[0]);
    case Kind::Flat: return Expr::flat(kids[0]);
    case Kind::Abs: return Expr::abs(kids[0]);
    case Kind::Recip: return Expr::recip(kids[0]);
    case Kind::Norm: return Expr::norm(std::move(kids));
    case Kind::Cases: return Expr::cases(kids[0], kids[1], kids[2], kids[3]);
    default: return e;
  }
}

}  // namespace

Expr Expr::cases(Expr guard, Expr neg, Expr zero, Expr pos) {
  if (guard.is_const()) {
    int s = guard.value().sign();
    return s < 0 ? neg : (s == 0 ? zero : pos);
  }
  neg = resolve_sign(neg, guard, -1);
  zero = resolve_sign(zero, guard, 0);
  pos = resolve_sign(pos, guard, 1);
  if (neg == pos && zero == neg) return neg;
  return Node::make(Kind::Cases, {std::move(guard), std::move(neg), std::move(zero), std::move(pos)});
}

Expr operator-(const Expr& a) { return Expr::product({Expr::constant(Scalar(-1)), a}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }

// ---------------------------------------------------------------------------
// printing

namespace {

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Const: {
      const Scalar& v = e.value();
      if (v.is_rational() && v.sign() >= 0)
        out += v.str();
      else if (v == Scalar::sqrt2())
        out += "sqrt2";
      else
        out += "(" + v.str() + ")";
      return;
    }
    case Kind::Var: out += "x" + std::to_string(e.index()); return;
    case Kind::Sum:
    case Kind::Product: {
      const char* sep = e.kind() == Kind::Sum ? " + " : " * ";
      out += "(";
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) out += sep;
        print(e.arg(i), out);
      }
      out += ")";
      return;
    }
    case Kind::IntPow:
      out += "(";
      print(e.arg(0), out);
      out += "^" + std::to_string(e.exponent()) + ")";
      return;
    case Kind::Cases:
      out += "cases(";
      print(e.arg(0), out);
      out += "; ";
      print(e.arg(1), out);
      out += ", ";
      print(e.arg(2), out);
      out += ", ";
      print(e.arg(3), out);
      out += ")";
      return;
    default:
      out += kind_name(e.kind());
      out += "(";
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) out += ", ";
        print(e.arg(i), out);
      }
      out += ")";
      return;
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// composition

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
    case Kind::Sum: return Expr::sum(std::move(kids));
    case Kind::Product: return Expr::product(std::move(kids));
    case Kind::IntPow: return Expr::pow(kids[0], e.exponent());
    case Kind::Sin: return Expr::sin(kids[0]);
    case Kind::Cos: return Expr::cos(kids[0]);
    case Kind::Flat: return Expr::flat(kids[0]);
    case Kind::Abs: return Expr::abs(kids[0]);
    case Kind::Recip: return Expr::recip(kids[0]);
    case Kind::Norm: return Expr::norm(std::move(kids));
    case Kind::Cases: return Expr::cases(kids[0], kids[1], kids[2], kids[3]);
    default: return e;
  }
}

}  // namespace

Expr compose(const Expr& e, std::span<const Expr> subs) {
  if (e.kind() == Kind::Const) return e;
  if (e.kind() == Kind::Var) {
    if (static_cast<std::size_t>(e.index()) >= subs.size())
      throw std::invalid_argument("compose: no substitute for x" + std::to_string(e.index()));
    return subs[static_cast<std::size_t>(e.index())];
  }
  std::vector<Expr> kids;
  kids.reserve(e.args().size());
  for (const Expr& c : e.args()) kids.push_back(compose(c, subs));
  return rebuild(e, std::move(kids));
}

std::vector<Expr> compose_all(std::span<const Expr> es, std::span<const Expr> subs) {
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const Expr& e : es) out.push_back(compose(e, subs));
  return out;
}

Expr restrict_to_line(const Expr& e, std::span<const Scalar> base,
                      std::span<const Scalar> direction) {
  std::vector<Expr> subs;
  Expr t = Expr::var(0);
  for (std::size_t i = 0; i < base.size(); ++i)
    subs.push_back(Expr::constant(base[i]) + Expr::constant(direction[i]) * t);
  return compose(e, subs);
}

std::vector<double> to_doubles(std::span<const Scalar> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Scalar& s : v) out.push_back(s.to_double());
  return out;
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

bool has_flat_factor(const Expr& term, const Expr& guard) {
  auto is_flat_of_guard = [&guard](const Expr& f) {
    if (f.kind() == Kind::Flat && f.arg(0) == guard) return true;
    if (f.kind() == Kind::IntPow && f.arg(0).kind() == Kind::Flat && f.arg(0).arg(0) == guard)
      return true;
    return false;
  };
  if (is_flat_of_guard(term)) return true;
  if (term.kind() == Kind::Product)
    return std::any_of(term.args().begin(), term.args().end(), is_flat_of_guard);
  return false;
}

bool branch_flat_at_guard(const Expr& branch, const Expr& guard) {
  if (branch.is_zero()) return true;
  if (branch.kind() == Kind::Sum)
    return std::all_of(branch.args().begin(), branch.args().end(),
                       [&guard](const Expr& t) { return has_flat_factor(t, guard); });
  return has_flat_factor(branch, guard);
}

struct Differ {
  int var;
  bool flagged = false;

  Expr d(const Expr& e) {
    if (e.min_dim() <= var) return Expr::constant(Scalar(0));
    switch (e.kind()) {
      case Kind::Const: return Expr::constant(Scalar(0));
      case Kind::Var: return Expr::constant(Scalar(e.index() == var ? 1 : 0));
      case Kind::Sum: {
        std::vector<Expr> terms;
        for (const Expr& c : e.args()) terms.push_back(d(c));
        return Expr::sum(std::move(terms));
      }
      case Kind::Product: {
        std::vector<Expr> terms;
        auto kids = e.args();
        for (std::size_t i = 0; i < kids.size(); ++i) {
          Expr di = d(kids[i]);
          if (di.is_zero()) continue;
          std::vector<Expr> f(kids.begin(), kids.end());
          f[i] = di;
          terms.push_back(Expr::product(std::move(f)));
        }
        return Expr::sum(std::move(terms));
      }
      case Kind::IntPow: {
        const Expr& b = e.arg(0);
        unsigned n = e.exponent();
        return Expr::product({Expr::constant(Scalar(static_cast<long>(n))), Expr::pow(b, n - 1), d(b)});
      }
      case Kind::Sin: return Expr::product({Expr::cos(e.arg(0)), d(e.arg(0))});
      case Kind::Cos: return -Expr::product({Expr::sin(e.arg(0)), d(e.arg(0))});
      case Kind::Flat: {
        // (2 u' / u^3) exp(-1/u^2), extended by 0 where u = 0
        const Expr& u = e.arg(0);
        Expr du = d(u);
        if (du.is_zero()) return Expr::constant(Scalar(0));
        Expr branch = Expr::product({Expr::constant(Scalar(2)), du, Expr::pow(Expr::recip(u), 3), e});
        return Expr::cases(u, branch, Expr::constant(Scalar(0)), branch);
      }
      case Kind::Abs: {
        const Expr& u = e.arg(0);
        Expr du = d(u);
        if (du.is_zero()) return Expr::constant(Scalar(0));
        flagged = true;
        return Expr::cases(u, -du, Expr::constant(Scalar(0)), du);
      }
      case Kind::Cases: {
        const Expr& g = e.arg(0);
        bool flat_join = e.arg(2).is_zero() && branch_flat_at_guard(e.arg(1), g) &&
                         branch_flat_at_guard(e.arg(3), g);
        if (!flat_join && !d(g).is_zero()) flagged = true;
        return Expr::cases(g, d(e.arg(1)), d(e.arg(2)), d(e.arg(3)));
      }
      case Kind::Recip: {
        const Expr& u = e.arg(0);
        return -Expr::product({d(u), Expr::pow(e, 2)});
      }
      case Kind::Norm: {
        std::vector<Expr> terms;
        for (const Expr& v : e.args()) terms.push_back(v * d(v));
        Expr numer = Expr::sum(std::move(terms));
        if (numer.is_zero()) return numer;
        flagged = true;
        return Expr::cases(e, Expr::constant(Scalar(0)), Expr::constant(Scalar(0)),
                           numer * Expr::recip(e));
      }
    }
    return Expr::constant(Scalar(0));
  }
};

}  // namespace

Derivative differentiate(const Expr& e, int var) {
  if (var < 0) throw std::invalid_argument("negative variable index");
  Differ differ{var};
  Expr out = differ.d(e);
  return {out, differ.flagged};
}

Derivative differentiate_n(const Expr& e, int var, unsigned times) {
  Derivative acc{e, false};
  for (unsigned i = 0; i < times; ++i) {
    Derivative step = differentiate(acc.expr, var);
    acc.expr = step.expr;
    acc.valid_off_guard_locus_only = acc.valid_off_guard_locus_only || step.valid_off_guard_locus_only;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

double eval_d(const Expr& e, std::span<const double> x) {
  auto check = [](double v) {
    if (!std::isfinite(v)) throw EvalError("non-finite value during evaluation");
    return v;
  };
  switch (e.kind()) {
    case Kind::Const: return e.value().to_double();
    case Kind::Var:
      if (static_cast<std::size_t>(e.index()) >= x.size())
        throw EvalError("point dimension too small for x" + std::to_string(e.index()));
      return x[static_cast<std::size_t>(e.index())];
    case Kind::Sum: {
      double s = 0;
      for (const Expr& c : e.args()) s += eval_d(c, x);
      return check(s);
    }
    case Kind::Product: {
      double p = 1;
      for (const Expr& c : e.args()) {
        p *= eval_d(c, x);
        if (p == 0.0) {
          // still evaluate the rest so that errors are not hidden
          for (const Expr& r : e.args()) (void)eval_d(r, x);
          return 0.0;
        }
      }
      return check(p);
    }
    case Kind::IntPow: {
      double b = eval_d(e.arg(0), x);
      double r = 1;
      for (unsigned i = 0; i < e.exponent(); ++i) r *= b;
      return check(r);
    }
    case Kind::Sin: return std::sin(eval_d(e.arg(0), x));
    case Kind::Cos: return std::cos(eval_d(e.arg(0), x));
    case Kind::Flat: {
      double u = eval_d(e.arg(0), x);
      if (u == 0.0) return 0.0;
      return std::exp(-1.0 / (u * u));
    }
    case Kind::Abs: return std::fabs(eval_d(e.arg(0), x));
    case Kind::Cases: {
      double g = eval_d(e.arg(0), x);
      return eval_d(g < 0 ? e.arg(1) : (g == 0 ? e.arg(2) : e.arg(3)), x);
    }
    case Kind::Recip: {
      double u = eval_d(e.arg(0), x);
      if (u == 0.0) throw EvalError("division by zero in recip");
      return check(1.0 / u);
    }
    case Kind::Norm: {
      double s = 0;
      for (const Expr& c : e.args()) {
        double v = eval_d(c, x);
        s += v * v;
      }
      return check(std::sqrt(s));
    }
  }
  return 0;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

std::optional<Scalar> eval_x(const Expr& e, std::span<const Scalar> x) {
  switch (e.kind()) {
    case Kind::Const: return e.value();
    case Kind::Var:
      if (static_cast<std::size_t>(e.index()) >= x.size())
        throw EvalError("point dimension too small for x" + std::to_string(e.index()));
      return x[static_cast<std::size_t>(e.index())];
    case Kind::Sum: {
      Scalar s(0);
      for (const Expr& c : e.args()) {
        auto v = eval_x(c, x);
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case Kind::Product: {
      Scalar p(1);
      bool exact = true;
      for (const Expr& c : e.args()) {
        auto v = eval_x(c, x);
        if (!v) {
          exact = false;
          continue;
        }
        if (v->is_zero()) {
          // 0 * (anything finite) = 0; finish the walk for error reporting
          for (const Expr& r : e.args()) (void)eval_x(r, x);
          return Scalar(0);
        }
        p *= *v;
      }
      if (!exact) return std::nullopt;
      return p;
    }
    case Kind::IntPow: {
      auto b = eval_x(e.arg(0), x);
      if (!b) return std::nullopt;
      return b->pow(e.exponent());
    }
    case Kind::Sin: {
      auto u = eval_x(e.arg(0), x);
      if (u && u->is_zero()) return Scalar(0);
      return std::nullopt;
    }
    case Kind::Cos: {
      auto u = eval_x(e.arg(0), x);
      if (u && u->is_zero()) return Scalar(1);
      return std::nullopt;
    }
    case Kind::Flat: {
      auto u = eval_x(e.arg(0), x);
      if (u && u->is_zero()) return Scalar(0);
      return std::nullopt;
    }
    case Kind::Abs: {
      auto u = eval_x(e.arg(0), x);
      if (!u) return std::nullopt;
      return u->sign() < 0 ? -*u : *u;
    }
    case Kind::Cases: {
      auto g = eval_x(e.arg(0), x);
      if (!g) return std::nullopt;
      int s = g->sign();
      return eval_x(s < 0 ? e.arg(1) : (s == 0 ? e.arg(2) : e.arg(3)), x);
    }
    case Kind::Recip: {
      auto u = eval_x(e.arg(0), x);
      if (!u) {
        // a zero denominator must still be reported
        if (eval_d(e.arg(0), to_doubles(x)) == 0.0) throw EvalError("division by zero in recip");
        return std::nullopt;
      }
      if (u->is_zero()) throw EvalError("division by zero in recip");
      return u->inverse();
    }
    case Kind::Norm: {
      Scalar s(0);
      for (const Expr& c : e.args()) {
        auto v = eval_x(c, x);
        if (!v) return std::nullopt;
        s += *v * *v;
      }
      if (!s.is_rational()) return std::nullopt;
      if (auto r = rational_sqrt(s.rational_part())) return Scalar(*r);
      if (auto r = rational_sqrt(s.rational_part() / 2)) return Scalar(Rational(0), *r);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

double evaluate(const Expr& e, std::span<const double> point) { return eval_d(e, point); }

std::optional<Scalar> evaluate_exact(const Expr& e, std::span<const Scalar> point) {
  return eval_x(e, point);
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(std::string_view s, int dim) : s_(s), dim_(dim) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(-term());
      else
        break;
    }
    return terms.size() == 1 ? terms[0] : Expr::sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> f{unary()};
    while (accept('*')) f.push_back(unary());
    return f.size() == 1 ? f[0] : Expr::product(std::move(f));
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected nonnegative integer exponent");
      unsigned long n = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (n > 1000) fail("exponent too large");
      return Expr::pow(base, static_cast<unsigned>(n));
    }
    return base;
  }

  std::string integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = integer();
      skip();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip();
        std::string den = integer();
        if (den.empty()) fail("expected denominator");
        mpz_class zn(num), zd(den);
        if (zd == 0) fail("zero denominator");
        Rational q(zn, zd);
        q.canonicalize();
        return Expr::constant(Scalar(q));
      }
      return Expr::constant(Scalar(Rational(mpz_class(num))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id(s_.substr(start, pos_ - start));
      if (id == "sqrt2") return Expr::constant(Scalar::sqrt2());
      if (id == "t") return variable(0, start);
      if (id.size() > 1 && id[0] == 'x' &&
          std::all_of(id.begin() + 1, id.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
        return variable(std::stoi(id.substr(1)), start);
      if (id == "cases") {
        expect('(');
        Expr g = expr();
        expect(';');
        Expr a = expr();
        expect(',');
        Expr b = expr();
        expect(',');
        Expr cc = expr();
        expect(')');
        return Expr::cases(g, a, b, cc);
      }
      expect('(');
      std::vector<Expr> list{expr()};
      while (accept(',')) list.push_back(expr());
      expect(')');
      auto unary_fn = [&](auto make) {
        if (list.size() != 1) {
          pos_ = start;
          fail("function '" + id + "' takes one argument");
        }
        return make(list[0]);
      };
      if (id == "sin") return unary_fn(Expr::sin);
      if (id == "cos") return unary_fn(Expr::cos);
      if (id == "flat") return unary_fn(Expr::flat);
      if (id == "abs") return unary_fn(Expr::abs);
      if (id == "recip") return unary_fn(Expr::recip);
      if (id == "norm") return Expr::norm(std::move(list));
      pos_ = start;
      fail("unknown function '" + id + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr variable(int index, std::size_t start) {
    if (index >= dim_) {
      pos_ = start;
      fail("variable x" + std::to_string(index) + " out of range for dimension " +
           std::to_string(dim_));
    }
    return Expr::var(index);
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int dim) { return Parser(text, dim).run(); }

}  // namespace smoothkit
