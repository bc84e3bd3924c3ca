#include "smoothkit/jets.hpp"

#include <algorithm>

namespace smoothkit {

namespace {

std::optional<Rational> rat_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

// how far past the requested order guards and norms are expanded
constexpr std::size_t kExtra = 8;

class SeriesEval {
 public:
  SeriesEval(std::span<const Scalar> p, std::span<const Scalar> d, int side, int order)
      : p_(p), d_(d), side_(side), n_(static_cast<std::size_t>(order) + 1) {}

  std::optional<Series> eval(const Expr& e) {
    switch (e.kind()) {
      case Kind::Const: return constant(e.value());
      case Kind::Var: {
        auto i = static_cast<std::size_t>(e.index());
        if (i >= p_.size()) return std::nullopt;
        Series s = constant(p_[i]);
        if (n_ > 1) s[1] = d_[i];
        return s;
      }
      case Kind::Sum: {
        Series acc = constant(Scalar(0));
        for (const Expr& c : e.args()) {
          auto v = eval(c);
          if (!v) return std::nullopt;
          for (std::size_t j = 0; j < n_; ++j) acc[j] += (*v)[j];
        }
        return acc;
      }
      case Kind::Product: {
        Series acc = constant(Scalar(1));
        for (const Expr& c : e.args()) {
          auto v = eval(c);
          if (!v) return std::nullopt;
          acc = mul(acc, *v);
        }
        return acc;
      }
      case Kind::IntPow: {
        auto b = eval(e.arg(0));
        if (!b) return std::nullopt;
        return pow(*b, e.exponent());
      }
      case Kind::Sin:
      case Kind::Cos: {
        auto u = eval(e.arg(0));
        if (!u || !(*u)[0].is_zero()) return std::nullopt;
        return trig(*u, e.kind() == Kind::Sin);
      }
      case Kind::Flat: {
        // exp(-1/u^2) is flat wherever u vanishes
        auto u = eval(e.arg(0));
        if (!u || !(*u)[0].is_zero()) return std::nullopt;
        return constant(Scalar(0));
      }
      case Kind::Abs: {
        auto u = eval(e.arg(0));
        if (!u) return std::nullopt;
        int s = guard_sign(e.arg(0), *u);
        if (s == 0) return std::nullopt;
        return s > 0 ? *u : scale(*u, Scalar(-1));
      }
      case Kind::Cases: {
        auto g = eval(e.arg(0));
        if (!g) return std::nullopt;
        int s = guard_sign(e.arg(0), *g);
        if (s == 0) return std::nullopt;
        return eval(s < 0 ? e.arg(1) : e.arg(3));
      }
      case Kind::Recip: {
        auto u = eval(e.arg(0));
        if (!u || (*u)[0].is_zero()) return std::nullopt;
        return inverse(*u);
      }
      case Kind::Norm: {
        Series sq = constant(Scalar(0));
        for (const Expr& c : e.args()) {
          auto v = eval(c);
          if (!v) return std::nullopt;
          Series v2 = mul(*v, *v);
          for (std::size_t j = 0; j < n_; ++j) sq[j] += v2[j];
        }
        std::size_t lead = 0;
        while (lead < n_ && sq[lead].is_zero()) ++lead;
        if (lead > 0) {
          // re-expand deeper so that sq / s^lead is known to n_ terms
          SeriesEval deep(p_, d_, side_, static_cast<int>(n_ - 1 + (lead < n_ ? lead : kExtra)));
          Series big = deep.constant(Scalar(0));
          for (const Expr& c : e.args()) {
            auto v = deep.eval(c);
            if (!v) return std::nullopt;
            Series v2 = deep.mul(*v, *v);
            for (std::size_t j = 0; j < big.size(); ++j) big[j] += v2[j];
          }
          return norm_sqrt(big);
        }
        return norm_sqrt(sq);
      }
    }
    return std::nullopt;
  }

 private:
  Series constant(const Scalar& c) const {
    Series s(n_, Scalar(0));
    s[0] = c;
    return s;
  }

  Series mul(const Series& a, const Series& b) const {
    Series r(n_, Scalar(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < n_; ++j)
        if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
  }

  Series pow(Series b, unsigned n) const {
    Series r = constant(Scalar(1));
    while (n) {
      if (n & 1u) r = mul(r, b);
      b = mul(b, b);
      n >>= 1u;
    }
    return r;
  }

  Series scale(const Series& a, const Scalar& c) const {
    Series r = a;
    for (auto& v : r) v *= c;
    return r;
  }

  Series inverse(const Series& a) const {
    Series b(n_, Scalar(0));
    Scalar inv0 = a[0].inverse();
    b[0] = inv0;
    for (std::size_t n = 1; n < n_; ++n) {
      Scalar acc(0);
      for (std::size_t k = 1; k <= n; ++k) acc += a[k] * b[n - k];
      b[n] = -(inv0 * acc);
    }
    return b;
  }

  // sin or cos of a series with zero constant term
  Series trig(const Series& u, bool is_sin) const {
    Series out = constant(Scalar(is_sin ? 0 : 1));
    Series power = constant(Scalar(1));
    Rational fact = 1;
    for (std::size_t k = 1; k < n_; ++k) {
      power = mul(power, u);
      fact *= static_cast<long>(k);
      bool odd = k % 2 == 1;
      if (odd != is_sin) continue;
      // sin: (-1)^((k-1)/2) u^k / k!, cos: (-1)^(k/2) u^k / k!
      long sgn_k = ((is_sin ? (k - 1) / 2 : k / 2) % 2 == 0) ? 1 : -1;
      Scalar c(Rational(Rational(sgn_k) / fact));
      for (std::size_t j = 0; j < n_; ++j) out[j] += power[j] * c;
    }
    return out;
  }

  // sign of the series on a small one-sided neighbourhood, 0 if undecided
  // the guard's sign on this side, looking past the truncation order when
  // the first n_ coefficients vanish
  int guard_sign(const Expr& g, const Series& s) const {
    int sg = side_sign(s);
    if (sg != 0) return sg;
    SeriesEval deep(p_, d_, side_, static_cast<int>(n_ - 1 + kExtra));
    auto v = deep.eval(g);
    return v ? deep.side_sign(*v) : 0;
  }

  int side_sign(const Series& s) const {
    for (std::size_t m = 0; m < n_; ++m) {
      int sg = s[m].sign();
      if (sg == 0) continue;
      if (side_ < 0 && m % 2 == 1) sg = -sg;
      return sg;
    }
    return 0;
  }

  // sqrt of a sum-of-squares series; sq must be long enough that the
  // result is known to n_ terms (callers re-expand deeper when it vanishes)
  std::optional<Series> norm_sqrt(const Series& sq) const {
    std::size_t len = sq.size();
    std::size_t lead = 0;
    while (lead < len && sq[lead].is_zero()) ++lead;
    if (lead == len || lead % 2 == 1) return std::nullopt;
    std::size_t m = lead / 2;
    std::size_t hn = len - lead;
    if (hn + m < n_) return std::nullopt;
    // sqrt(s^(2m) h) = |s|^m sqrt(h)
    auto r0 = exact_sqrt(sq[lead]);
    if (!r0) return std::nullopt;
    Series y(hn, Scalar(0));
    y[0] = *r0;
    Scalar two_y0_inv = (Scalar(2) * *r0).inverse();
    for (std::size_t n = 1; n < hn; ++n) {
      Scalar acc = sq[lead + n];
      for (std::size_t k = 1; k < n; ++k) acc -= y[k] * y[n - k];
      y[n] = acc * two_y0_inv;
    }
    Series out(n_, Scalar(0));
    Scalar sgn_m(side_ < 0 && m % 2 == 1 ? -1 : 1);
    for (std::size_t j = 0; j + m < n_; ++j) out[j + m] = y[j] * sgn_m;
    return out;
  }

  std::span<const Scalar> p_;
  std::span<const Scalar> d_;
  int side_;
  std::size_t n_;
};

}  // namespace

std::optional<Scalar> exact_sqrt(const Scalar& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_zero()) return Scalar(0);
  const Rational& a = x.rational_part();
  const Rational& b = x.sqrt2_part();
  if (sgn(b) == 0) {
    if (auto r = rat_sqrt(a)) return Scalar(*r);
    if (auto r = rat_sqrt(Rational(a / 2))) return Scalar(Rational(0), *r);
    return std::nullopt;
  }
  // (p + q sqrt2)^2 = p^2 + 2 q^2 + 2 p q sqrt2
  auto disc = rat_sqrt(Rational(a * a - 2 * b * b));
  if (!disc) return std::nullopt;
  for (int sg : {1, -1}) {
    Rational p2 = (a + sg * *disc) / 2;
    auto p = rat_sqrt(p2);
    if (!p || sgn(*p) == 0) continue;
    Rational q = b / (2 * *p);
    Scalar cand(*p, q);
    if (cand.sign() < 0) cand = -cand;
    if (cand * cand == x) return cand;
  }
  return std::nullopt;
}

std::optional<Series> one_sided_series(const Expr& e, std::span<const Scalar> point,
                                       std::span<const Scalar> direction, int side, int order) {
  if (order < 0) return std::nullopt;
  try {
    SeriesEval ev(point, direction, side, order);
    return ev.eval(e);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

std::vector<Scalar> series_derivatives(const Series& s) {
  std::vector<Scalar> out;
  Rational fact = 1;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j > 0) fact *= static_cast<long>(j);
    out.push_back(s[j] * Scalar(fact));
  }
  return out;
}

}  // namespace smoothkit
