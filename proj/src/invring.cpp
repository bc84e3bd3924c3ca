#include "smoothkit/invring.hpp"

#include <random>
#include <stdexcept>

#include "smoothkit/normal_form.hpp"

namespace smoothkit {

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = 0, db = 0;
  for (unsigned v : a) da += v;
  for (unsigned v : b) db += v;
  if (da != db) return da < db;
  return a > b;  // x0^2 before x0 x1 before x1^2
}

Coeffs expand_polynomial(const Expr& e, int n) {
  if (!e.is_polynomial()) throw std::invalid_argument("not a polynomial: " + e.str());
  Coeffs out;
  Poly p = to_poly(e);
  for (const auto& [m, c] : p.terms()) {
    Exponents ex(static_cast<std::size_t>(n), 0u);
    for (const auto& [atom, k] : m) {
      if (atom.rank != 0 || atom.var >= n) throw std::invalid_argument("not a polynomial in x0..x" + std::to_string(n - 1));
      ex[static_cast<std::size_t>(atom.var)] += k;
    }
    out[ex] += c;
    if (out[ex].is_zero()) out.erase(ex);
  }
  return out;
}

Expr from_coeffs(const Coeffs& c) {
  std::vector<Expr> terms;
  for (const auto& [ex, v] : c) {
    std::vector<Expr> f{Expr::constant(v)};
    for (std::size_t i = 0; i < ex.size(); ++i)
      if (ex[i]) f.push_back(Expr::pow(Expr::var(static_cast<int>(i)), ex[i]));
    terms.push_back(Expr::product(std::move(f)));
  }
  return normal_form(Expr::sum(std::move(terms)));
}

Expr reynolds(const Expr& e, const FiniteMatrixGroup& g) {
  if (!e.is_polynomial()) throw std::invalid_argument("reynolds needs a polynomial, got " + e.str());
  std::vector<Expr> terms;
  for (const Matrix& m : g.elements()) terms.push_back(g.act(e, m));
  Expr avg = Expr::constant(Scalar(Rational(1, static_cast<long>(g.order())))) * Expr::sum(std::move(terms));
  return from_coeffs(expand_polynomial(avg, g.dim()));
}

bool is_invariant(const Expr& e, const FiniteMatrixGroup& g) {
  for (const Matrix& m : g.elements())
    if (!equal_nf(g.act(e, m), e)) return false;
  return true;
}

namespace {

std::vector<Exponents> monomials_of_degree(int n, unsigned d) {
  std::vector<Exponents> out;
  Exponents cur(static_cast<std::size_t>(n), 0u);
  // recursive fill, x0-heavy first
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == cur.size()) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (unsigned k = left + 1; k-- > 0;) {
      cur[i] = k;
      self(self, i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

unsigned degree_of(const Coeffs& c) {
  unsigned d = 0;
  for (const auto& [ex, v] : c) {
    unsigned s = 0;
    for (unsigned k : ex) s += k;
    d = std::max(d, s);
  }
  return d;
}

std::vector<Scalar> vec_in(const Coeffs& c, const std::vector<Exponents>& basis) {
  std::vector<Scalar> v;
  for (const Exponents& ex : basis) {
    auto it = c.find(ex);
    v.push_back(it == c.end() ? Scalar(0) : it->second);
  }
  return v;
}

// products of the given homogeneous generators that have total degree d
void products_of_degree(const std::vector<Expr>& gens, const std::vector<unsigned>& degs, unsigned d,
                        std::size_t start, const Expr& acc, unsigned acc_deg,
                        std::vector<Expr>& out) {
  if (acc_deg == d) {
    out.push_back(acc);
    return;
  }
  for (std::size_t i = start; i < gens.size(); ++i) {
    if (degs[i] == 0 || acc_deg + degs[i] > d) continue;
    products_of_degree(gens, degs, d, i, acc * gens[i], acc_deg + degs[i], out);
  }
}

Matrix rows_of(const std::vector<Expr>& es, const std::vector<Exponents>& basis, int n) {
  Matrix m;
  for (const Expr& e : es) m.push_back(vec_in(expand_polynomial(e, n), basis));
  return m;
}

}  // namespace

std::vector<Expr> invariant_generators(const FiniteMatrixGroup& g, int d) {
  if (d < 1) throw std::invalid_argument("degree bound must be >= 1");
  int n = g.dim();
  std::vector<Expr> gens;
  std::vector<unsigned> degs;
  for (unsigned deg = 1; deg <= static_cast<unsigned>(d); ++deg) {
    auto basis = monomials_of_degree(n, deg);
    std::vector<Expr> prods;
    products_of_degree(gens, degs, deg, 0, Expr::constant(Scalar(1)), 0, prods);
    Matrix span = rows_of(prods, basis, n);
    std::size_t r = rank(span);
    for (const Exponents& m : basis) {
      Coeffs mono;
      mono[m] = Scalar(1);
      Expr cand = reynolds(from_coeffs(mono), g);
      Coeffs cc = expand_polynomial(cand, n);
      if (cc.empty()) continue;
      Matrix trial = span;
      trial.push_back(vec_in(cc, basis));
      std::size_t r2 = rank(trial);
      if (r2 == r) continue;
      // monic in the leading (first graded-lex) monomial
      Scalar lead = cc.begin()->second;
      for (auto& [ex, v] : cc) v /= lead;
      gens.push_back(from_coeffs(cc));
      degs.push_back(deg);
      span.push_back(vec_in(cc, basis));
      r = r2;
    }
  }
  return gens;
}

bool is_needed(const std::vector<Expr>& gens, std::size_t index, int n) {
  Coeffs target = expand_polynomial(gens[index], n);
  unsigned deg = degree_of(target);
  std::vector<Expr> others;
  std::vector<unsigned> degs;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i == index) continue;
    others.push_back(gens[i]);
    degs.push_back(degree_of(expand_polynomial(gens[i], n)));
  }
  // the subalgebra up to degree deg: products of the others of each degree <= deg
  std::vector<Exponents> basis;
  for (unsigned k = 0; k <= deg; ++k)
    for (auto& m : monomials_of_degree(n, k)) basis.push_back(m);
  std::vector<Expr> prods{Expr::constant(Scalar(1))};
  for (unsigned k = 1; k <= deg; ++k)
    products_of_degree(others, degs, k, 0, Expr::constant(Scalar(1)), 0, prods);
  Matrix a = transpose(rows_of(prods, basis, n));
  return !solve(a, vec_in(target, basis)).has_value();
}

std::string HilbertMap::note() const {
  return "generators complete up to degree " + std::to_string(degree_bound) +
         "; by Schwarz's theorem every smooth invariant is a smooth function of them, so the "
         "quotient differential structure is the subset structure on the image";
}

HilbertMap hilbert_map(const FiniteMatrixGroup& g, int d) {
  HilbertMap h;
  h.group = g;
  h.generators = invariant_generators(g, d);
  h.degree_bound = d;
  return h;
}

Matrix standard_cone_change() {
  return {{Scalar(1), Scalar(0), Scalar(-1)}, {Scalar(0), Scalar(2), Scalar(0)}, {Scalar(1), Scalar(0), Scalar(1)}};
}

ConeReport cone_image_check(const HilbertMap& h, const Matrix& change, int samples,
                            std::uint64_t seed) {
  if (change.size() != 3 || change[0].size() != 3 || determinant(change).is_zero())
    throw std::invalid_argument("cone change must be an invertible 3x3 matrix");
  if (h.target_dim() != 3 || h.group.dim() != 2)
    throw std::invalid_argument("cone check is for a 3-generator Hilbert map on R^2");
  ConeReport rep;
  rep.change = change;
  std::vector<Expr> xyz;
  for (const auto& row : change) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < 3; ++j) terms.push_back(Expr::constant(row[j]) * h.generators[j]);
    xyz.push_back(Expr::sum(std::move(terms)));
  }
  Expr cone = Expr::pow(xyz[2], 2) - Expr::pow(xyz[0], 2) - Expr::pow(xyz[1], 2);
  rep.identity_holds = is_zero_nf(cone);
  std::mt19937_64 rng(seed);
  bool first = true;
  for (int i = 0; i < samples; ++i) {
    auto coord = [&] { return Scalar::ratio(static_cast<long>(rng() % 513) - 256, 64); };
    std::vector<Scalar> pt{coord(), coord()};
    Scalar z = *evaluate_exact(xyz[2], pt);
    ++rep.samples;
    if (z.sign() >= 0) ++rep.nonnegative;
    if (first || (z - rep.min_z).sign() < 0) rep.min_z = z;
    first = false;
  }
  return rep;
}

}  // namespace smoothkit
