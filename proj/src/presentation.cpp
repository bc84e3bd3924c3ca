#include "smoothkit/presentation.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smoothkit/normal_form.hpp"
#include "smoothkit/smoothness.hpp"

namespace smoothkit {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// domains and plots

Domain Domain::all(int dims) {
  Domain d;
  d.lo.assign(static_cast<std::size_t>(dims), std::nullopt);
  d.hi.assign(static_cast<std::size_t>(dims), std::nullopt);
  return d;
}

Box Domain::box() const {
  Box b = Box::all(dims());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i]) b.lo[i] = lo[i]->to_double();
    if (hi[i]) b.hi[i] = hi[i]->to_double();
  }
  return b;
}

PlotGen PlotGen::make(std::vector<Expr> comps, int dims) {
  return make(std::move(comps), Domain::all(dims));
}

PlotGen PlotGen::make(std::vector<Expr> comps, Domain d) {
  PlotGen p;
  p.domain = std::move(d);
  p.components = std::move(comps);
  return p;
}

std::vector<std::vector<Scalar>> sample_domain(const Domain& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Scalar>> out;
  for (int k = 0; k < count; ++k) {
    std::vector<Scalar> x;
    for (int i = 0; i < d.dims(); ++i) {
      auto ui = static_cast<std::size_t>(i);
      double lo = d.lo[ui] ? d.lo[ui]->to_double() : -2.0;
      double hi = d.hi[ui] ? d.hi[ui]->to_double() : 2.0;
      if (!d.lo[ui] && d.hi[ui]) lo = std::min(-2.0, hi - 4.0);
      if (d.lo[ui] && !d.hi[ui]) hi = std::max(2.0, lo + 4.0);
      // strictly inside, on a 1/64 grid
      long a = static_cast<long>(std::floor(lo * 64)) + 1;
      long b = static_cast<long>(std::ceil(hi * 64)) - 1;
      if (b < a) b = a;
      long v = a + static_cast<long>(rng() % static_cast<std::uint64_t>(b - a + 1));
      x.push_back(Scalar::ratio(v, 64));
    }
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// groups

namespace {

std::string mat_key(const Matrix& m) {
  std::string k;
  for (const auto& row : m) {
    for (const auto& v : row) k += v.str() + ",";
    k += ";";
  }
  return k;
}

}  // namespace

FiniteMatrixGroup FiniteMatrixGroup::make(std::vector<Matrix> elements, const std::string& path) {
  if (elements.empty()) throw PresentationError(path + "/elements", "group is empty");
  std::size_t n = elements[0].size();
  if (n == 0) throw PresentationError(path + "/elements/0", "zero-dimensional matrix");
  std::set<std::string> keys;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::string p = path + "/elements/" + std::to_string(i);
    const Matrix& g = elements[i];
    if (g.size() != n) throw PresentationError(p, "matrix has wrong size");
    for (const auto& row : g)
      if (row.size() != n) throw PresentationError(p, "matrix is not square");
    if (!is_identity(multiply(transpose(g), g))) throw PresentationError(p, "matrix is not orthogonal");
    if (!keys.insert(mat_key(g)).second) throw PresentationError(p, "duplicate element");
  }
  if (!keys.count(mat_key(identity(n))))
    throw PresentationError(path + "/elements", "identity is missing");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    // orthogonal, so the inverse is the transpose
    if (!keys.count(mat_key(transpose(elements[i]))))
      throw PresentationError(path + "/elements/" + std::to_string(i),
                              "closure error: inverse is missing");
    for (std::size_t j = 0; j < elements.size(); ++j)
      if (!keys.count(mat_key(multiply(elements[i], elements[j]))))
        throw PresentationError(path + "/elements",
                                "closure error: product of elements " + std::to_string(i) +
                                    " and " + std::to_string(j) + " is missing");
  }
  FiniteMatrixGroup g;
  g.dim_ = static_cast<int>(n);
  g.elements_ = std::move(elements);
  return g;
}

FiniteMatrixGroup FiniteMatrixGroup::trivial(int n) {
  return make({identity(static_cast<std::size_t>(n))});
}

FiniteMatrixGroup FiniteMatrixGroup::sign_flips(int n) {
  std::vector<Matrix> els;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Matrix m = identity(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Scalar(-1);
    els.push_back(std::move(m));
  }
  return make(std::move(els));
}

FiniteMatrixGroup FiniteMatrixGroup::plus_minus(int n) {
  Matrix neg = identity(static_cast<std::size_t>(n));
  for (auto& row : neg)
    for (auto& v : row) v = -v;
  return make({identity(static_cast<std::size_t>(n)), neg});
}

Expr FiniteMatrixGroup::act(const Expr& e, const Matrix& g) const {
  std::vector<Expr> subs;
  for (const auto& row : g) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) terms.push_back(Expr::constant(row[j]) * Expr::var(static_cast<int>(j)));
    subs.push_back(Expr::sum(std::move(terms)));
  }
  return compose(e, subs);
}

// ---------------------------------------------------------------------------
// carriers

Carrier Carrier::euclidean(int n) {
  Carrier c;
  c.kind = CarrierKind::Euclidean;
  c.dim = n;
  return c;
}

bool Carrier::contains(std::span<const Scalar> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  switch (kind) {
    case CarrierKind::Euclidean:
    case CarrierKind::QuotientByFlow: return true;
    case CarrierKind::QuotientByGroup: return inner->contains(x);
    case CarrierKind::Subset: {
      if (rational_points)
        for (const Scalar& v : x)
          if (!v.is_rational()) return false;
      for (const Expr& e : equations) {
        auto v = evaluate_exact(e, x);
        if (!v) return contains_approx(to_doubles(x));
        if (!v->is_zero()) return false;
      }
      for (const Expr& e : inequalities) {
        auto v = evaluate_exact(e, x);
        if (!v) return contains_approx(to_doubles(x));
        if (v->sign() < 0) return false;
      }
      return true;
    }
    case CarrierKind::Wedge: {
      std::size_t off = 0;
      int nonzero_block = -1;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        auto d = static_cast<std::size_t>(pieces[i].dim);
        for (std::size_t j = 0; j < d; ++j)
          if (!x[off + j].is_zero()) {
            if (nonzero_block >= 0 && nonzero_block != static_cast<int>(i)) return false;
            nonzero_block = static_cast<int>(i);
          }
        off += d;
      }
      if (nonzero_block < 0) return true;
      off = 0;
      for (int i = 0; i < nonzero_block; ++i) off += static_cast<std::size_t>(pieces[static_cast<std::size_t>(i)].dim);
      const Carrier& piece = pieces[static_cast<std::size_t>(nonzero_block)];
      std::vector<Scalar> local;
      for (int j = 0; j < piece.dim; ++j)
        local.push_back(x[off + static_cast<std::size_t>(j)] +
                        basepoints[static_cast<std::size_t>(nonzero_block)][static_cast<std::size_t>(j)]);
      return piece.contains(local);
    }
  }
  return false;
}

bool Carrier::contains_approx(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim) return false;
  switch (kind) {
    case CarrierKind::Euclidean:
    case CarrierKind::QuotientByFlow: return true;
    case CarrierKind::QuotientByGroup: return inner->contains_approx(x, tol);
    case CarrierKind::Subset: {
      double scale = 1;
      for (double v : x) scale = std::max(scale, std::fabs(v));
      try {
        for (const Expr& e : equations)
          if (std::fabs(evaluate(e, x)) > tol * scale) return false;
        for (const Expr& e : inequalities)
          if (evaluate(e, x) < -tol * scale) return false;
      } catch (const EvalError&) {
        return false;
      }
      return true;
    }
    case CarrierKind::Wedge: {
      std::size_t off = 0;
      int blocks = 0;
      for (const Carrier& piece : pieces) {
        bool nz = false;
        for (int j = 0; j < piece.dim; ++j)
          nz = nz || std::fabs(x[off + static_cast<std::size_t>(j)]) > tol;
        blocks += nz;
        off += static_cast<std::size_t>(piece.dim);
      }
      return blocks <= 1;
    }
  }
  return false;
}

SpacePresentation standard_space(int n) {
  if (n < 1) throw std::invalid_argument("standard_space needs n >= 1 (points are modelled as subsets)");
  SpacePresentation p;
  p.label = "R^" + std::to_string(n);
  p.carrier = Carrier::euclidean(n);
  std::vector<Expr> id;
  for (int i = 0; i < n; ++i) {
    p.fn_generators.push_back(Expr::var(i));
    id.push_back(Expr::var(i));
  }
  p.plot_generators.push_back(PlotGen::make(id, n));
  p.construction = "standard";
  return p;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PresentationError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dirname(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw PresentationError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw PresentationError(path + "/" + key, "missing field");
  return *it;
}

std::string str_of(const json& j, const std::string& path) {
  if (!j.is_string()) throw PresentationError(path, "expected a string");
  return j.get<std::string>();
}

int int_of(const json& j, const std::string& path) {
  std::string s = str_of(j, path);
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PresentationError(path, "expected an integer string, got '" + s + "'");
  }
}

Scalar scalar_of(const json& j, const std::string& path) {
  try {
    return Scalar::parse(str_of(j, path));
  } catch (const std::invalid_argument& e) {
    throw PresentationError(path, e.what());
  }
}

Expr expr_of(const json& j, int dim, const std::string& path) {
  try {
    return parse_expr(str_of(j, path), dim);
  } catch (const ParseError& e) {
    throw PresentationError(path, e.what());
  }
}

std::vector<Expr> exprs_of(const json& j, int dim, const std::string& path) {
  if (!j.is_array()) throw PresentationError(path, "expected an array");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(expr_of(j[i], dim, path + "/" + std::to_string(i)));
  return out;
}

Matrix matrix_of(const json& j, const std::string& path) {
  if (!j.is_array()) throw PresentationError(path, "expected a matrix (array of rows)");
  Matrix m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array()) throw PresentationError(rp, "expected a row");
    std::vector<Scalar> row;
    for (std::size_t c = 0; c < j[r].size(); ++c)
      row.push_back(scalar_of(j[r][c], rp + "/" + std::to_string(c)));
    m.push_back(std::move(row));
  }
  return m;
}

FiniteMatrixGroup group_of(const json& j, const std::string& path) {
  const json& els = field(j, "elements", path);
  if (!els.is_array()) throw PresentationError(path + "/elements", "expected an array");
  std::vector<Matrix> ms;
  for (std::size_t i = 0; i < els.size(); ++i)
    ms.push_back(matrix_of(els[i], path + "/elements/" + std::to_string(i)));
  FiniteMatrixGroup g = FiniteMatrixGroup::make(std::move(ms), path);
  if (j.contains("dim") && int_of(j["dim"], path + "/dim") != g.dim())
    throw PresentationError(path + "/dim", "does not match the matrix size");
  return g;
}

json bound_json(const std::optional<Scalar>& v, bool low) {
  return v ? v->str() : std::string(low ? "-inf" : "inf");
}

std::optional<Scalar> bound_of(const json& j, const std::string& path) {
  std::string s = str_of(j, path);
  if (s == "-inf" || s == "inf" || s == "+inf") return std::nullopt;
  return scalar_of(j, path);
}

PlotGen plot_of(const json& j, int target_dim, const std::string& path) {
  if (j.contains("schema")) {
    if (str_of(j["schema"], path + "/schema") != "all-smooth-curves")
      throw PresentationError(path + "/schema", "unknown schema");
    if (j.contains("components"))
      throw PresentationError(path + "/components", "the curve schema carries no components");
    return PlotGen::curves_schema();
  }
  const json& dom = field(j, "domain", path);
  int k = int_of(field(dom, "dims", path + "/domain"), path + "/domain/dims");
  if (k < 1) throw PresentationError(path + "/domain/dims", "domain dimension must be >= 1");
  Domain d = Domain::all(k);
  if (dom.contains("bounds")) {
    const json& b = dom["bounds"];
    std::string bp = path + "/domain/bounds";
    if (!b.is_array() || static_cast<int>(b.size()) != k)
      throw PresentationError(bp, "expected one [lo, hi] pair per dimension");
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::string ip = bp + "/" + std::to_string(i);
      if (!b[i].is_array() || b[i].size() != 2) throw PresentationError(ip, "expected [lo, hi]");
      d.lo[i] = bound_of(b[i][0], ip + "/0");
      d.hi[i] = bound_of(b[i][1], ip + "/1");
      if (d.lo[i] && d.hi[i] && (*d.hi[i] - *d.lo[i]).sign() <= 0)
        throw PresentationError(ip, "empty interval");
    }
  }
  std::string cp = path + "/components";
  std::vector<Expr> comps = exprs_of(field(j, "components", path), k, cp);
  bool orbit = false;
  if (j.contains("coordinates")) {
    if (str_of(j["coordinates"], path + "/coordinates") != "invariant")
      throw PresentationError(path + "/coordinates", "unknown coordinate marker");
    orbit = true;
  }
  if (orbit) {
    PlotGen g = PlotGen::make(std::move(comps), std::move(d));
    g.orbit_coords = true;
    return g;
  }
  if (static_cast<int>(comps.size()) != target_dim)
    throw PresentationError(cp, "arity mismatch: " + std::to_string(comps.size()) +
                                    " components for a carrier of dimension " +
                                    std::to_string(target_dim));
  return PlotGen::make(std::move(comps), std::move(d));
}

json plot_json(const PlotGen& p) {
  json j;
  if (p.all_smooth_curves) {
    j["schema"] = "all-smooth-curves";
    return j;
  }
  json dom;
  dom["dims"] = std::to_string(p.dims());
  json bounds = json::array();
  for (int i = 0; i < p.dims(); ++i) {
    auto ui = static_cast<std::size_t>(i);
    bounds.push_back(json::array({bound_json(p.domain.lo[ui], true), bound_json(p.domain.hi[ui], false)}));
  }
  dom["bounds"] = bounds;
  j["domain"] = dom;
  json comps = json::array();
  for (const Expr& e : p.components) comps.push_back(e.str());
  j["components"] = comps;
  if (p.orbit_coords) j["coordinates"] = "invariant";
  return j;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& v : r) row.push_back(v.str());
    rows.push_back(row);
  }
  return rows;
}

json group_json(const FiniteMatrixGroup& g) {
  json j;
  j["dim"] = std::to_string(g.dim());
  json els = json::array();
  for (const Matrix& m : g.elements()) els.push_back(matrix_json(m));
  j["elements"] = els;
  return j;
}

Carrier carrier_of(const json& j, const std::string& path, const std::string& base_dir,
                   const json* top_group, const std::string& top_group_path) {
  std::string kind = str_of(field(j, "kind", path), path + "/kind");
  Carrier c;
  if (kind == "euclidean") {
    c.kind = CarrierKind::Euclidean;
    c.dim = int_of(field(j, "dim", path), path + "/dim");
    if (c.dim < 1) throw PresentationError(path + "/dim", "dimension must be >= 1");
  } else if (kind == "subset") {
    c.kind = CarrierKind::Subset;
    c.dim = int_of(field(j, "dim", path), path + "/dim");
    if (c.dim < 1) throw PresentationError(path + "/dim", "dimension must be >= 1");
    if (j.contains("equations")) c.equations = exprs_of(j["equations"], c.dim, path + "/equations");
    if (j.contains("inequalities"))
      c.inequalities = exprs_of(j["inequalities"], c.dim, path + "/inequalities");
    if (j.contains("ideal_generators"))
      c.ideal_generators = exprs_of(j["ideal_generators"], c.dim, path + "/ideal_generators");
    if (j.contains("parametrizations")) {
      const json& ps = j["parametrizations"];
      if (!ps.is_array()) throw PresentationError(path + "/parametrizations", "expected an array");
      for (std::size_t i = 0; i < ps.size(); ++i)
        c.parametrizations.push_back(
            plot_of(ps[i], c.dim, path + "/parametrizations/" + std::to_string(i)));
    }
    if (j.contains("points")) {
      std::string pts = str_of(j["points"], path + "/points");
      if (pts != "rational") throw PresentationError(path + "/points", "unknown point marker");
      c.rational_points = true;
    }
  } else if (kind == "quotient_group") {
    c.kind = CarrierKind::QuotientByGroup;
    auto inner = std::make_shared<Carrier>(
        carrier_of(field(j, "inner", path), path + "/inner", base_dir, nullptr, ""));
    c.dim = inner->dim;
    c.inner = inner;
    if (j.contains("group")) {
      if (j["group"].is_string()) {
        c.group_source = j["group"].get<std::string>();
        std::string gp = c.group_source.front() == '/' ? c.group_source : base_dir + "/" + c.group_source;
        c.group = load_group_file(gp);
      } else {
        c.group = group_of(j["group"], path + "/group");
      }
    } else if (top_group) {
      c.group_source = top_group_path;
      std::string gp = top_group_path.front() == '/' ? top_group_path : base_dir + "/" + top_group_path;
      c.group = load_group_file(gp);
    } else {
      throw PresentationError(path + "/group", "quotient carrier needs a group");
    }
    if (c.group.dim() != c.dim)
      throw PresentationError(path + "/group", "group dimension does not match the carrier");
  } else if (kind == "quotient_flow") {
    c.kind = CarrierKind::QuotientByFlow;
    c.dim = 2;
    if (j.contains("dim") && int_of(j["dim"], path + "/dim") != 2)
      throw PresentationError(path + "/dim", "the flow quotient lives on the 2-torus");
    c.slope = scalar_of(field(j, "slope", path), path + "/slope");
    if (c.slope.is_rational()) throw PresentationError(path + "/slope", "slope must be irrational");
  } else if (kind == "wedge") {
    c.kind = CarrierKind::Wedge;
    const json& ps = field(j, "pieces", path);
    const json& bs = field(j, "basepoints", path);
    if (!ps.is_array() || !bs.is_array() || ps.size() != bs.size() || ps.size() < 2)
      throw PresentationError(path, "a wedge needs at least two pieces with one basepoint each");
    c.dim = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::string ip = path + "/pieces/" + std::to_string(i);
      Carrier piece = carrier_of(ps[i], ip, base_dir, nullptr, "");
      std::string bp = path + "/basepoints/" + std::to_string(i);
      if (!bs[i].is_array() || static_cast<int>(bs[i].size()) != piece.dim)
        throw PresentationError(bp, "basepoint has the wrong dimension");
      std::vector<Scalar> b;
      for (std::size_t k = 0; k < bs[i].size(); ++k)
        b.push_back(scalar_of(bs[i][k], bp + "/" + std::to_string(k)));
      if (!piece.contains(b)) throw PresentationError(bp, "basepoint is not in its piece");
      c.dim += piece.dim;
      c.pieces.push_back(std::move(piece));
      c.basepoints.push_back(std::move(b));
    }
  } else {
    throw PresentationError(path + "/kind", "unknown carrier kind '" + kind + "'");
  }
  return c;
}

json carrier_json(const Carrier& c) {
  json j;
  switch (c.kind) {
    case CarrierKind::Euclidean:
      j["kind"] = "euclidean";
      j["dim"] = std::to_string(c.dim);
      break;
    case CarrierKind::Subset: {
      j["kind"] = "subset";
      j["dim"] = std::to_string(c.dim);
      auto list = [](const std::vector<Expr>& es) {
        json a = json::array();
        for (const Expr& e : es) a.push_back(e.str());
        return a;
      };
      j["equations"] = list(c.equations);
      j["inequalities"] = list(c.inequalities);
      if (c.ideal_generators) j["ideal_generators"] = list(*c.ideal_generators);
      json ps = json::array();
      for (const PlotGen& p : c.parametrizations) ps.push_back(plot_json(p));
      j["parametrizations"] = ps;
      if (c.rational_points) j["points"] = "rational";
      break;
    }
    case CarrierKind::QuotientByGroup:
      j["kind"] = "quotient_group";
      j["inner"] = carrier_json(*c.inner);
      if (!c.group_source.empty())
        j["group"] = c.group_source;
      else
        j["group"] = group_json(c.group);
      break;
    case CarrierKind::QuotientByFlow:
      j["kind"] = "quotient_flow";
      j["dim"] = "2";
      j["slope"] = c.slope.str();
      break;
    case CarrierKind::Wedge: {
      j["kind"] = "wedge";
      json ps = json::array(), bs = json::array();
      for (std::size_t i = 0; i < c.pieces.size(); ++i) {
        ps.push_back(carrier_json(c.pieces[i]));
        json b = json::array();
        for (const Scalar& v : c.basepoints[i]) b.push_back(v.str());
        bs.push_back(b);
      }
      j["pieces"] = ps;
      j["basepoints"] = bs;
      break;
    }
  }
  return j;
}

}  // namespace

SpacePresentation load_presentation(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PresentationError("", std::string("invalid JSON: ") + e.what());
  }
  SpacePresentation p;
  p.label = str_of(field(j, "label", ""), "/label");
  const json* top_group = j.contains("group") ? &j["group"] : nullptr;
  std::string top_group_path = top_group ? str_of(*top_group, "/group") : "";
  p.carrier = carrier_of(field(j, "carrier", ""), "/carrier", base_dir, top_group, top_group_path);
  if (j.contains("fn_generators"))
    p.fn_generators = exprs_of(j["fn_generators"], p.carrier.dim, "/fn_generators");
  if (j.contains("plot_generators")) {
    const json& ps = j["plot_generators"];
    if (!ps.is_array()) throw PresentationError("/plot_generators", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i)
      p.plot_generators.push_back(plot_of(ps[i], p.carrier.dim, "/plot_generators/" + std::to_string(i)));
  }
  if (j.contains("construction")) p.construction = str_of(j["construction"], "/construction");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> known = {"label",           "carrier", "fn_generators",
                                                "plot_generators", "group",   "construction"};
    if (!known.count(it.key())) throw PresentationError("/" + it.key(), "unknown field");
  }
  validate_presentation(p);
  return p;
}

SpacePresentation load_presentation_file(const std::string& path) {
  return load_presentation(read_file(path), dirname(path));
}

std::string save_presentation(const SpacePresentation& p) {
  json j;
  j["label"] = p.label;
  j["carrier"] = carrier_json(p.carrier);
  json fns = json::array();
  for (const Expr& e : p.fn_generators) fns.push_back(e.str());
  j["fn_generators"] = fns;
  json plots = json::array();
  for (const PlotGen& g : p.plot_generators) plots.push_back(plot_json(g));
  j["plot_generators"] = plots;
  if (!p.construction.empty()) j["construction"] = p.construction;
  return j.dump(2) + "\n";
}

FiniteMatrixGroup load_group(std::string_view text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PresentationError(path, std::string("invalid JSON: ") + e.what());
  }
  return group_of(j, path);
}

FiniteMatrixGroup load_group_file(const std::string& path) { return load_group(read_file(path), path); }

std::string save_group(const FiniteMatrixGroup& g) { return group_json(g).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// validation

namespace {

// sampled check that a plot's image lies in the carrier
void check_image(const PlotGen& p, const Carrier& c, const std::string& path) {
  auto pts = sample_domain(p.domain, 100, 0x1a6e5eedULL);
  for (const auto& u : pts) {
    std::vector<Scalar> exact;
    std::vector<double> approx;
    bool all_exact = true;
    bool defined = true;
    for (const Expr& comp : p.components) {
      try {
        auto v = evaluate_exact(comp, u);
        if (v) {
          exact.push_back(*v);
          approx.push_back(v->to_double());
        } else {
          all_exact = false;
          approx.push_back(evaluate(comp, to_doubles(u)));
        }
      } catch (const EvalError&) {
        defined = false;
        break;
      }
    }
    if (!defined) continue;
    bool in = all_exact ? c.contains(exact) : c.contains_approx(approx);
    if (!in) {
      std::string at;
      for (const Scalar& v : u) at += (at.empty() ? "" : ",") + v.str();
      throw PresentationError(path, "image leaves the carrier at domain point (" + at + ")");
    }
  }
}

}  // namespace

CompatibilityReport validate_presentation(const SpacePresentation& p) {
  const Carrier& c = p.carrier;
  if (c.kind == CarrierKind::Subset && c.ideal_generators) {
    for (std::size_t k = 0; k < c.parametrizations.size(); ++k) {
      const PlotGen& q = c.parametrizations[k];
      std::string qp = "/carrier/parametrizations/" + std::to_string(k);
      check_image(q, c, qp);
      for (std::size_t g = 0; g < c.ideal_generators->size(); ++g) {
        Expr comp = compose((*c.ideal_generators)[g], q.components);
        auto pts = sample_domain(q.domain, 100, 0x1dea1ULL + g);
        for (const auto& u : pts) {
          auto v = evaluate_exact(comp, u);
          bool zero = v ? v->is_zero() : std::fabs(evaluate(comp, to_doubles(u))) < 1e-9;
          if (!zero)
            throw PresentationError("/carrier/ideal_generators/" + std::to_string(g),
                                    "does not vanish on parametrization " + std::to_string(k));
        }
      }
    }
  }
  CompatibilityReport rep;
  for (std::size_t i = 0; i < p.plot_generators.size(); ++i) {
    const PlotGen& q = p.plot_generators[i];
    std::string qp = "/plot_generators/" + std::to_string(i);
    if (q.all_smooth_curves) {
      for (std::size_t k = 0; k < p.fn_generators.size(); ++k) {
        ++rep.pairs;
        auto v = certify_smooth(p.fn_generators[k], c.dim);
        if (v.not_ck())
          throw PresentationError("/fn_generators/" + std::to_string(k),
                                  "incompatible with the curve schema: " + v.reason);
        (v.smooth() ? rep.certified : rep.unknown) += 1;
      }
      continue;
    }
    if (q.orbit_coords) {
      if (c.kind != CarrierKind::QuotientByGroup || q.components.size() != p.fn_generators.size())
        throw PresentationError(qp, "invariant coordinates need a group quotient and one component "
                                    "per fn generator");
    } else {
      check_image(q, c, qp);
    }
    for (std::size_t k = 0; k < p.fn_generators.size(); ++k) {
      ++rep.pairs;
      Expr comp = q.orbit_coords ? q.components[k] : compose(p.fn_generators[k], q.components);
      auto v = certify_smooth(comp, q.domain.box());
      if (v.not_ck())
        throw PresentationError(qp, "incompatible with fn generator " + std::to_string(k) + ": " +
                                        v.reason);
      (v.smooth() ? rep.certified : rep.unknown) += 1;
    }
  }
  return rep;
}

}  // namespace smoothkit

#include "smoothkit/json_io.hpp"

namespace smoothkit {

json plot_to_json(const PlotGen& p) { return plot_json(p); }

PlotGen plot_from_json(const json& j, int target_dim) { return plot_of(j, target_dim, ""); }

json scalars_json(std::span<const Scalar> v) {
  json a = json::array();
  for (const Scalar& s : v) a.push_back(s.str());
  return a;
}

std::vector<Scalar> scalars_from_json(const json& j) {
  std::vector<Scalar> v;
  for (const auto& s : j) v.push_back(Scalar::parse(s.get<std::string>()));
  return v;
}

}  // namespace smoothkit
