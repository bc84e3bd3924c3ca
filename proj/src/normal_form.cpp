#include "smoothkit/normal_form.hpp"

#include <algorithm>

namespace smoothkit {

bool operator==(const std::pair<Atom, unsigned>& a, const std::pair<Atom, unsigned>& b) {
  return a.first == b.first && a.second == b.second;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  // graded first, then lexicographic on (atom, exponent)
  unsigned da = 0, db = 0;
  for (const auto& [_, n] : a) da += n;
  for (const auto& [_, n] : b) db += n;
  if (da != db) return da < db;
  std::size_t k = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < k; ++i) {
    if (!(a[i].first == b[i].first)) return a[i].first < b[i].first;
    if (a[i].second != b[i].second) return a[i].second > b[i].second;
  }
  return a.size() < b.size();
}

Poly Poly::constant(const Scalar& c) {
  Poly p;
  if (!c.is_zero()) p.terms_[Monomial{}] = c;
  return p;
}

Poly Poly::atom(const Atom& a) {
  Poly p;
  p.terms_[Monomial{{a, 1u}}] = Scalar(1);
  return p;
}

Poly Poly::monomial(Monomial m, const Scalar& c) {
  Poly p;
  p.add_term(std::move(m), c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar Poly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Scalar(0) : it->second;
}

void Poly::add_term(Monomial m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::scale(const Scalar& c) const {
  Poly r;
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scale(Scalar(-1)); }

namespace {

Poly to_poly_impl(const Expr& e);

bool is_recip_of(const Atom& r, const Atom& a) {
  return r.expr.kind() == Kind::Recip && r.expr.arg(0) == a.expr;
}

// Multiply two monomials and apply atom-level identities. Returns the
// resulting polynomial (identities such as abs^2 = u^2 may expand).
Poly multiply_monomials(const Monomial& a, const Monomial& b) {
  std::map<Atom, unsigned> acc;
  for (const auto& [at, n] : a) acc[at] += n;
  for (const auto& [at, n] : b) acc[at] += n;
  // recip(A) * A cancellation
  for (auto& [at, n] : acc) {
    if (n == 0 || at.expr.kind() != Kind::Recip) continue;
    for (auto& [other, m] : acc) {
      if (m == 0 || !is_recip_of(at, other)) continue;
      unsigned k = std::min(n, m);
      n -= k;
      m -= k;
    }
  }
  Poly result = Poly::constant(Scalar(1));
  Monomial plain;
  for (const auto& [at, n] : acc) {
    if (n == 0) continue;
    Kind k = at.expr.kind();
    if ((k == Kind::Abs || k == Kind::Norm) && n >= 2) {
      Poly sq;
      if (k == Kind::Abs) {
        Poly u = to_poly_impl(at.expr.arg(0));
        sq = u * u;
      } else {
        for (const Expr& v : at.expr.args()) {
          Poly pv = to_poly_impl(v);
          sq = sq + pv * pv;
        }
      }
      result = result * sq.pow(n / 2);
      if (n % 2) plain.emplace_back(at, 1u);
      continue;
    }
    plain.emplace_back(at, n);
  }
  Poly mono = Poly::monomial(std::move(plain), Scalar(1));
  return result.is_constant() && result.constant_term().is_one() ? mono : result * mono;
}

}  // namespace

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Scalar c = ca * cb;
      bool simple = true;
      // fast path: no special atoms involved
      for (const auto& [at, _] : ma) {
        Kind k = at.expr.kind();
        if (k == Kind::Abs || k == Kind::Norm || k == Kind::Recip) simple = false;
      }
      for (const auto& [at, _] : mb) {
        Kind k = at.expr.kind();
        if (k == Kind::Abs || k == Kind::Norm || k == Kind::Recip) simple = false;
      }
      if (simple) {
        std::map<Atom, unsigned> acc;
        for (const auto& [at, n] : ma) acc[at] += n;
        for (const auto& [at, n] : mb) acc[at] += n;
        Monomial m(acc.begin(), acc.end());
        r.add_term(std::move(m), c);
      } else {
        Poly prod = multiply_monomials(ma, mb);
        for (const auto& [m, k] : prod.terms_) r.add_term(m, k * c);
      }
    }
  }
  return r;
}

Poly Poly::pow(unsigned n) const {
  Poly result = constant(Scalar(1));
  Poly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

int Poly::leading_sign() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->second.sign();
}

Expr Poly::to_expr() const {
  std::vector<Expr> terms;
  for (const auto& [m, c] : terms_) {
    std::vector<Expr> f{Expr::constant(c)};
    for (const auto& [at, n] : m) f.push_back(Expr::pow(at.expr, n));
    terms.push_back(Expr::product(std::move(f)));
  }
  return Expr::sum(std::move(terms));
}

namespace {

Atom make_atom(const Expr& e) {
  if (e.kind() == Kind::Var) return Atom{0, e.index(), "x" + std::to_string(e.index()), e};
  return Atom{1, 0, e.str(), e};
}

Poly make_atom_poly(const Expr& e) { return Poly::atom(make_atom(e)); }

Poly to_poly_impl(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return Poly::constant(e.value());
    case Kind::Var: return make_atom_poly(e);
    case Kind::Sum: {
      Poly p;
      for (const Expr& c : e.args()) p = p + to_poly_impl(c);
      return p;
    }
    case Kind::Product: {
      Poly p = Poly::constant(Scalar(1));
      for (const Expr& c : e.args()) {
        p = p * to_poly_impl(c);
        if (p.is_zero()) return p;
      }
      return p;
    }
    case Kind::IntPow: return to_poly_impl(e.arg(0)).pow(e.exponent());
    case Kind::Sin:
    case Kind::Cos: {
      Poly u = to_poly_impl(e.arg(0));
      if (u.is_zero()) return Poly::constant(Scalar(e.kind() == Kind::Cos ? 1 : 0));
      if (e.kind() == Kind::Sin && u.leading_sign() < 0)
        return make_atom_poly(Expr::sin(u.scale(Scalar(-1)).to_expr())).scale(Scalar(-1));
      if (e.kind() == Kind::Cos && u.leading_sign() < 0)
        return make_atom_poly(Expr::cos(u.scale(Scalar(-1)).to_expr()));
      return make_atom_poly(e.kind() == Kind::Sin ? Expr::sin(u.to_expr()) : Expr::cos(u.to_expr()));
    }
    case Kind::Flat:
    case Kind::Abs: {
      Expr inner = e.arg(0);
      while (e.kind() == Kind::Flat && inner.kind() == Kind::Abs) inner = inner.arg(0);
      Poly u = to_poly_impl(inner);
      if (u.is_zero()) return Poly();
      if (u.is_constant()) {
        Scalar c = u.constant_term();
        if (e.kind() == Kind::Abs) return Poly::constant(c.sign() < 0 ? -c : c);
      }
      if (u.leading_sign() < 0) u = u.scale(Scalar(-1));
      Expr ue = u.to_expr();
      return make_atom_poly(e.kind() == Kind::Flat ? Expr::flat(ue) : Expr::abs(ue));
    }
    case Kind::Recip: {
      Poly u = to_poly_impl(e.arg(0));
      if (u.is_constant() && !u.is_zero()) return Poly::constant(u.constant_term().inverse());
      // recip(c * single atom) = (1/c) recip(atom)
      if (u.terms().size() == 1) {
        const auto& [m, c] = *u.terms().begin();
        Poly r = Poly::constant(c.inverse());
        for (const auto& [at, n] : m) r = r * make_atom_poly(Expr::recip(at.expr)).pow(n);
        return r;
      }
      return make_atom_poly(Expr::recip(u.to_expr()));
    }
    case Kind::Norm: {
      std::vector<Expr> parts;
      for (const Expr& v : e.args()) {
        Poly pv = to_poly_impl(v);
        if (pv.leading_sign() < 0) pv = pv.scale(Scalar(-1));
        parts.push_back(pv.to_expr());
      }
      std::sort(parts.begin(), parts.end(),
                [](const Expr& a, const Expr& b) { return a.str() < b.str(); });
      Expr n = Expr::norm(std::move(parts));
      if (n.kind() != Kind::Norm) return to_poly_impl(n);
      return make_atom_poly(n);
    }
    case Kind::Cases: {
      Poly g = to_poly_impl(e.arg(0));
      Expr a = normal_form(e.arg(1));
      Expr b = normal_form(e.arg(2));
      Expr c = normal_form(e.arg(3));
      if (g.leading_sign() < 0) {
        g = g.scale(Scalar(-1));
        std::swap(a, c);
      }
      Expr built = Expr::cases(g.to_expr(), a, b, c);
      if (built.kind() != Kind::Cases) return to_poly_impl(built);
      return make_atom_poly(built);
    }
  }
  return Poly();
}

}  // namespace

Poly to_poly(const Expr& e) { return to_poly_impl(e); }
Expr normal_form(const Expr& e) { return to_poly_impl(e).to_expr(); }
bool equal_nf(const Expr& a, const Expr& b) { return (to_poly(a) - to_poly(b)).is_zero(); }
bool is_zero_nf(const Expr& e) { return to_poly(e).is_zero(); }

}  // namespace smoothkit
