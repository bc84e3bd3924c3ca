#include "smoothkit/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace smoothkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v) { return std::isinf(v) ? v : std::nextafter(v, -kInf); }
double up(double v) { return std::isinf(v) ? v : std::nextafter(v, kInf); }

Interval widen(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) return Interval::entire();
  return {down(lo), up(hi)};
}

// 0 * inf counts as 0 for endpoint products, the usual interval convention
double mul_end(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

Interval add(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }

Interval mul(Interval a, Interval b) {
  double c[4] = {mul_end(a.lo, b.lo), mul_end(a.lo, b.hi), mul_end(a.hi, b.lo),
                 mul_end(a.hi, b.hi)};
  return widen(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Interval square(Interval a) {
  if (a.lo >= 0) return widen(mul_end(a.lo, a.lo), mul_end(a.hi, a.hi));
  if (a.hi <= 0) return widen(mul_end(a.hi, a.hi), mul_end(a.lo, a.lo));
  return {0.0, up(std::max(mul_end(a.lo, a.lo), mul_end(a.hi, a.hi)))};
}

Interval ipow(Interval a, unsigned n) {
  if (n == 0) return Interval::point(1);
  if (n % 2 == 0) {
    Interval s = square(a);
    return n == 2 ? s : ipow(s, n / 2);
  }
  Interval r = a;
  for (unsigned i = 1; i < n; ++i) r = mul(r, a);
  return r;
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval eval(const Expr& e, const Box& box) {
  switch (e.kind()) {
    case Kind::Const: {
      double v = e.value().to_double();
      return widen(v, v);
    }
    case Kind::Var: {
      auto i = static_cast<std::size_t>(e.index());
      if (i >= box.lo.size()) return Interval::entire();
      return {box.lo[i], box.hi[i]};
    }
    case Kind::Sum: {
      Interval s = Interval::point(0);
      for (const Expr& c : e.args()) s = add(s, eval(c, box));
      return s;
    }
    case Kind::Product: {
      Interval p = Interval::point(1);
      for (const Expr& c : e.args()) p = mul(p, eval(c, box));
      return p;
    }
    case Kind::IntPow: return ipow(eval(e.arg(0), box), e.exponent());
    case Kind::Sin:
    case Kind::Cos: return {-1.0, 1.0};
    case Kind::Flat: {
      // exp(-1/u^2) is increasing in u^2
      Interval s = square(eval(e.arg(0), box));
      double lo = s.lo <= 0 ? 0.0 : std::exp(-1.0 / s.lo);
      double hi = std::isinf(s.hi) ? 1.0 : std::exp(-1.0 / s.hi);
      return {std::max(0.0, down(lo)), std::min(1.0, up(hi))};
    }
    case Kind::Abs: {
      Interval a = eval(e.arg(0), box);
      if (a.lo >= 0) return a;
      if (a.hi <= 0) return {-a.hi, -a.lo};
      return {0.0, std::max(-a.lo, a.hi)};
    }
    case Kind::Cases: {
      Interval g = eval(e.arg(0), box);
      if (g.positive()) return eval(e.arg(3), box);
      if (g.negative()) return eval(e.arg(1), box);
      Interval r = eval(e.arg(2), box);
      if (g.lo < 0) r = hull(r, eval(e.arg(1), box));
      if (g.hi > 0) r = hull(r, eval(e.arg(3), box));
      return r;
    }
    case Kind::Recip: {
      Interval u = eval(e.arg(0), box);
      if (u.contains_zero()) return Interval::entire();
      double a = 1.0 / u.hi, b = 1.0 / u.lo;
      return widen(std::min(a, b), std::max(a, b));
    }
    case Kind::Norm: {
      Interval s = Interval::point(0);
      for (const Expr& c : e.args()) s = add(s, square(eval(c, box)));
      return {std::max(0.0, down(std::sqrt(std::max(0.0, s.lo)))), up(std::sqrt(s.hi))};
    }
  }
  return Interval::entire();
}

int sign_of(const Interval& v, bool allow_zero) {
  if (v.positive() || (allow_zero && v.nonnegative())) return 1;
  if (v.negative() || (allow_zero && v.nonpositive())) return -1;
  return 0;
}

int split_sign(const Expr& e, const Box& box, bool allow_zero, int depth) {
  int s = sign_of(eval(e, box), allow_zero);
  if (s != 0 || depth == 0 || !box.bounded()) return s;
  // bisect the widest side
  std::size_t k = 0;
  for (std::size_t i = 1; i < box.lo.size(); ++i)
    if (box.hi[i] - box.lo[i] > box.hi[k] - box.lo[k]) k = i;
  if (box.lo.empty() || box.hi[k] - box.lo[k] <= 0) return 0;
  double mid = 0.5 * (box.lo[k] + box.hi[k]);
  Box left = box, right = box;
  left.hi[k] = mid;
  right.lo[k] = mid;
  int a = split_sign(e, left, allow_zero, depth - 1);
  if (a == 0) return 0;
  int b = split_sign(e, right, allow_zero, depth - 1);
  return a == b ? a : 0;
}

}  // namespace

Box Box::all(int dim) {
  Box b;
  b.lo.assign(static_cast<std::size_t>(dim), -kInf);
  b.hi.assign(static_cast<std::size_t>(dim), kInf);
  return b;
}

bool Box::bounded() const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (std::isinf(lo[i]) || std::isinf(hi[i])) return false;
  return true;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() < lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  return true;
}

std::string Box::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (i) os << " x ";
    os << "(" << lo[i] << ", " << hi[i] << ")";
  }
  return os.str();
}

Interval eval_interval(const Expr& e, const Box& box) { return eval(e, box); }

int certified_sign(const Expr& e, const Box& box, bool allow_zero, int depth) {
  return split_sign(e, box, allow_zero, depth);
}

}  // namespace smoothkit
