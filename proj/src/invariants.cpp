#include "smoothkit/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "smoothkit/normal_form.hpp"
#include "smoothkit/smoothness.hpp"

namespace smoothkit {

TangentReport zariski_tangent_dim(const Carrier& s, const std::vector<Scalar>& point) {
  if (s.kind != CarrierKind::Subset && s.kind != CarrierKind::Euclidean)
    throw std::invalid_argument("tangent dimension needs a subset carrier");
  if (static_cast<int>(point.size()) != s.dim) throw std::invalid_argument("point has the wrong dimension");
  if (s.kind == CarrierKind::Subset && !s.ideal_generators)
    throw std::invalid_argument("subset has no ideal generators");
  if (!s.contains(point)) throw std::invalid_argument("point is not on the subset");
  TangentReport r;
  r.point = point;
  r.ambient_dim = s.dim;
  r.assumption_note = "ideal generators are trusted to generate the ideal of germs at the point";
  Matrix jac;
  if (s.ideal_generators)
    for (const Expr& g : *s.ideal_generators) {
      std::vector<Scalar> row;
      for (int i = 0; i < s.dim; ++i) {
        auto v = evaluate_exact(differentiate(g, i).expr, point);
        if (!v) throw std::invalid_argument("ideal generator has no exact derivative at the point");
        row.push_back(*v);
      }
      jac.push_back(std::move(row));
    }
  r.jacobian_rank = static_cast<int>(rank(jac));
  r.tangent_dim = s.dim - r.jacobian_rank;
  return r;
}

namespace {

int numeric_rank(std::vector<std::vector<double>> a, double tol) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  double scale = 0;
  for (auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0) return 0;
  int r = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t p = static_cast<std::size_t>(r);
    for (std::size_t i = p; i < rows; ++i)
      if (std::fabs(a[i][c]) > std::fabs(a[p][c])) p = i;
    if (std::fabs(a[p][c]) <= tol * scale) continue;
    std::swap(a[p], a[static_cast<std::size_t>(r)]);
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows; ++i) {
      double f = a[i][c] / a[static_cast<std::size_t>(r)][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[static_cast<std::size_t>(r)][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

std::optional<RankRecord> jacobian_rank_at(const PlotGen& p, const std::vector<Scalar>& point) {
  Matrix ex;
  std::vector<std::vector<double>> num;
  bool exact = true;
  try {
    for (const Expr& c : p.components) {
      std::vector<Scalar> row;
      std::vector<double> nrow;
      for (int j = 0; j < p.dims(); ++j) {
        Derivative d = differentiate(c, j);
        auto v = evaluate_exact(d.expr, point);
        if (v) {
          row.push_back(*v);
          nrow.push_back(v->to_double());
        } else {
          exact = false;
          row.push_back(Scalar(0));
          nrow.push_back(evaluate(d.expr, to_doubles(point)));
        }
      }
      ex.push_back(std::move(row));
      num.push_back(std::move(nrow));
    }
  } catch (const EvalError&) {
    return std::nullopt;
  }
  RankRecord r;
  r.point = point;
  r.exact = exact;
  r.rank = exact ? static_cast<int>(rank(ex)) : numeric_rank(num, 1e-8);
  return r;
}

std::optional<RankRecord> rank_obstruction(const PlotGen& p, int samples, std::uint64_t seed) {
  if (p.all_smooth_curves) return std::nullopt;
  std::vector<std::vector<Scalar>> pts;
  std::vector<Scalar> first(static_cast<std::size_t>(p.dims()), Scalar(0));
  first[0] = Scalar(1);
  if (p.domain.box().contains(to_doubles(first))) pts.push_back(first);
  for (auto& s : sample_domain(p.domain, samples, seed)) pts.push_back(std::move(s));
  for (const auto& x : pts) {
    auto r = jacobian_rank_at(p, x);
    if (r && r->rank >= 2) return r;
  }
  return std::nullopt;
}

ConstancyRecord locally_constant_check(const PlotGen& p, const Carrier& target) {
  if (!target.totally_disconnected())
    throw std::invalid_argument("locally_constant_check needs a totally disconnected target");
  ConstancyRecord rec;
  if (p.dims() != 1) {
    rec.reason = "not a curve";
    return rec;
  }
  bool constant = std::all_of(p.components.begin(), p.components.end(),
                              [](const Expr& c) { return normal_form(c).is_const(); });
  if (constant) {
    rec.status = ConstancyStatus::ConfirmedLocallyConstant;
    rec.reason = "syntactically constant";
    return rec;
  }
  Box box = p.domain.box();
  for (const Expr& c : p.components)
    if (!certify_smooth(c, box).smooth()) {
      rec.reason = "continuity not certified";
      return rec;
    }
  // two parameters on a 1/8 grid with distinct exact values
  std::vector<Scalar> grid;
  for (long k = -16; k <= 16; ++k) {
    Scalar s = Scalar::ratio(k, 8);
    if (box.contains(to_doubles(std::vector<Scalar>{s}))) grid.push_back(s);
  }
  auto value = [&](const Scalar& s) -> std::optional<std::vector<Scalar>> {
    std::vector<Scalar> out;
    std::vector<Scalar> x{s};
    for (const Expr& c : p.components) {
      auto v = evaluate_exact(c, x);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto vi = value(grid[i]);
    if (!vi) continue;
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      auto vj = value(grid[j]);
      if (!vj || *vj == *vi) continue;
      rec.status = ConstancyStatus::NotLocallyConstant;
      rec.a = grid[i];
      rec.b = grid[j];
      rec.va = *vi;
      rec.vb = *vj;
      rec.reason = "continuous curve takes two distinct values; by the intermediate value "
                   "theorem it also takes the irrational ones in between";
      return rec;
    }
  }
  rec.reason = "no two distinct exact sample values";
  return rec;
}

// ---------------------------------------------------------------------------
// line arrangements

Slope Slope::parse(std::string_view s) {
  Slope r;
  if (s == "inf" || s == "∞") {
    r.infinite = true;
    return r;
  }
  r.value = Scalar::parse(s);
  return r;
}

std::string Slope::str() const { return infinite ? "inf" : value.str(); }

std::vector<Scalar> Slope::direction() const {
  if (infinite) return {Scalar(0), Scalar(1)};
  return {Scalar(1), value};
}

bool Slope::operator==(const Slope& o) const {
  return infinite == o.infinite && (infinite || value == o.value);
}

namespace {

Scalar cross(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

Slope slope_of(const std::vector<Scalar>& v) {
  Slope s;
  if (v[0].is_zero()) {
    s.infinite = true;
    return s;
  }
  s.value = v[1] / v[0];
  return s;
}

void require_distinct(const std::vector<Slope>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] == a[j]) throw std::invalid_argument("repeated slope " + a[i].str());
}

// columns c0, c1 -> matrix
Matrix from_columns(const std::vector<Scalar>& c0, const std::vector<Scalar>& c1) {
  return {{c0[0], c1[0]}, {c0[1], c1[1]}};
}

std::optional<Matrix> candidate(const std::vector<Slope>& a, const std::vector<Slope>& b,
                                const std::vector<std::size_t>& perm) {
  std::size_t k = a.size();
  auto v1 = a[0].direction();
  auto w1 = b[perm[0]].direction();
  if (k == 1) {
    // rotate/shear v1 onto w1: pick complements (0,1) or (1,0)
    std::vector<Scalar> cv = v1[0].is_zero() ? std::vector<Scalar>{Scalar(1), Scalar(0)}
                                             : std::vector<Scalar>{Scalar(0), Scalar(1)};
    std::vector<Scalar> cw = w1[0].is_zero() ? std::vector<Scalar>{Scalar(1), Scalar(0)}
                                             : std::vector<Scalar>{Scalar(0), Scalar(1)};
    auto vinv = inverse(from_columns(v1, cv));
    return multiply(from_columns(w1, cw), *vinv);
  }
  auto v2 = a[1].direction();
  auto w2 = b[perm[1]].direction();
  auto vinv = inverse(from_columns(v1, v2));
  auto winv = inverse(from_columns(w1, w2));
  if (!vinv || !winv) return std::nullopt;
  Scalar l1(1), l2(1);
  if (k >= 3) {
    // v3 = al v1 + be v2, w3 = ga w1 + de w2; scale so M v3 is parallel to w3
    auto v3 = a[2].direction();
    auto w3 = b[perm[2]].direction();
    auto ab = mat_vec(*vinv, v3);
    auto gd = mat_vec(*winv, w3);
    if (ab[0].is_zero() || ab[1].is_zero() || gd[0].is_zero() || gd[1].is_zero()) return std::nullopt;
    l1 = gd[0] / ab[0];
    l2 = gd[1] / ab[1];
  }
  std::vector<Scalar> c0{w1[0] * l1, w1[1] * l1}, c1{w2[0] * l2, w2[1] * l2};
  return multiply(from_columns(c0, c1), *vinv);
}

}  // namespace

bool verify_equivalence(const std::vector<Slope>& a, const std::vector<Slope>& b,
                        const EquivalenceCertificate& c) {
  if (!c.equivalent || a.size() != b.size() || c.permutation.size() != a.size()) return false;
  if (c.matrix.size() != 2 || determinant(c.matrix).is_zero()) return false;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j = c.permutation[i];
    if (j >= b.size() || used[j]) return false;
    used[j] = true;
    if (!cross(mat_vec(c.matrix, a[i].direction()), b[j].direction()).is_zero()) return false;
  }
  return true;
}

EquivalenceCertificate lines_equivalence(const std::vector<Slope>& a, const std::vector<Slope>& b) {
  require_distinct(a);
  require_distinct(b);
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("arrangements need the same size k >= 1");
  EquivalenceCertificate cert;
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    ++cert.permutations_tried;
    auto m = candidate(a, b, perm);
    if (!m) continue;
    EquivalenceCertificate c;
    c.equivalent = true;
    c.matrix = *m;
    c.permutation = perm;
    if (verify_equivalence(a, b, c)) {
      c.permutations_tried = cert.permutations_tried;
      return c;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cert;
}

std::vector<Slope> transform_arrangement(const std::vector<Slope>& a, const Matrix& m) {
  std::vector<Slope> out;
  for (const Slope& s : a) out.push_back(slope_of(mat_vec(m, s.direction())));
  return out;
}

std::vector<Slope> load_arrangement(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("arrangement must be a JSON list of slope strings");
  std::vector<Slope> out;
  for (const auto& v : j) out.push_back(Slope::parse(v.get<std::string>()));
  require_distinct(out);
  return out;
}

}  // namespace smoothkit
