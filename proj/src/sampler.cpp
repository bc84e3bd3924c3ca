#include "smoothkit/sampler.hpp"

namespace smoothkit {

Scalar ExprSampler::small_rational() {
  long num = static_cast<long>(below(9)) - 4;
  long den = 1 + below(3);
  return Scalar::ratio(num, den);
}

double ExprSampler::uniform(double lo, double hi) {
  double u = static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
  return lo + (hi - lo) * u;
}

Expr ExprSampler::leaf() {
  int r = below(10);
  if (r < 3) {
    Scalar c = small_rational();
    if (below(8) == 0) c += Scalar::sqrt2();
    return Expr::constant(c);
  }
  return Expr::var(below(dim_));
}

Expr ExprSampler::polynomial(int degree, int terms) {
  std::vector<Expr> out;
  for (int i = 0; i < terms; ++i) {
    std::vector<Expr> f{Expr::constant(small_rational())};
    int d = below(degree + 1);
    for (int k = 0; k < d; ++k) f.push_back(Expr::var(below(dim_)));
    out.push_back(Expr::product(std::move(f)));
  }
  return Expr::sum(std::move(out));
}

// mode 0: R1 only, 1: mixed (flat/abs/cases), 2: everything
Expr ExprSampler::node(int depth, int mode) {
  if (depth <= 0) return leaf();
  int choices = mode == 0 ? 7 : (mode == 1 ? 9 : 11);
  int r = below(choices);
  switch (r) {
    case 0: return leaf();
    case 1: return Expr::sum({node(depth - 1, mode), node(depth - 1, mode)});
    case 2: return Expr::product({node(depth - 1, mode), node(depth - 1, mode)});
    case 3: return Expr::pow(node(depth - 1, mode), 2 + static_cast<unsigned>(below(2)));
    case 4: return Expr::sin(node(depth - 1, mode));
    case 5: return Expr::cos(node(depth - 1, mode));
    case 6: return Expr::flat(node(depth - 1, mode));
    case 7: return Expr::abs(node(depth - 1, mode));
    case 8: {
      Expr g = Expr::var(below(dim_));
      return Expr::cases(g, node(depth - 1, mode), node(depth - 1, mode), node(depth - 1, mode));
    }
    case 9: return Expr::recip(Expr::sum({Expr::constant(Scalar(2)), Expr::pow(node(depth - 1, mode), 2)}));
    default: return Expr::norm({node(depth - 1, mode), node(depth - 1, mode)});
  }
}

Expr ExprSampler::r1(int depth) { return node(depth, 0); }
Expr ExprSampler::mixed(int depth) { return node(depth, 1); }
Expr ExprSampler::any(int depth) { return node(depth, 2); }

}  // namespace smoothkit
