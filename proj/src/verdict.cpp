#include "smoothkit/verdict.hpp"

#include <cmath>

#include "smoothkit/constructions.hpp"
#include "smoothkit/normal_form.hpp"

namespace smoothkit {

std::string_view witness_kind(const Witness& w) {
  static constexpr std::string_view names[] = {
      "CompositionNotSmooth", "RankObstruction",   "NoContinuousLift", "NotLocallyConstant",
      "TopologyObstruction",  "JetObstruction",    "OutsideCarrier"};
  return names[w.index()];
}

Verdict Verdict::yes(std::vector<std::string> cert) {
  Verdict v;
  v.outcome = Outcome::Yes;
  v.certificate = std::move(cert);
  return v;
}

Verdict Verdict::no(Witness w, std::string reason) {
  Verdict v;
  v.outcome = Outcome::No;
  v.witness = std::move(w);
  v.reason = std::move(reason);
  return v;
}

Verdict Verdict::unknown(std::string reason) {
  Verdict v;
  v.reason = std::move(reason);
  return v;
}

bool contradicts(const Verdict& a, const Verdict& b) {
  return (a.is_yes() && b.is_no()) || (a.is_no() && b.is_yes());
}

namespace {

bool recheck(const CompositionNotSmooth& w) {
  if (!w.verdict.not_ck()) return false;
  // a function given only through its pullback is its own composite
  if (!w.plot.all_smooth_curves && w.f != w.composite &&
      !equal_nf(compose(w.f, w.plot.components), w.composite))
    return false;
  return recheck_not_ck(w.composite, w.verdict);
}

bool recheck(const RankObstruction& w) {
  auto r = jacobian_rank_at(w.plot, w.record.point);
  return r && r->rank >= 2 && r->rank == w.record.rank;
}

bool recheck(const NoContinuousLift& w) { return recheck_lift(w); }

bool recheck(const NotLocallyConstant& w) {
  ConstancyRecord r = locally_constant_check(w.plot, w.target);
  return r.status == ConstancyStatus::NotLocallyConstant && r.va == w.record.va &&
         r.vb == w.record.vb;
}

bool recheck(const TopologyObstruction& w) { return recheck_step(w); }

bool recheck(const JetObstruction& w) {
  if (w.directions.empty()) return false;
  if (w.mode == JetObstruction::Mode::OneSided) {
    auto m = jet_mismatch(w.f, w.point, w.directions[0], w.order);
    if (!m || m->order != w.order) return false;
    return w.left.empty() || (m->left == w.left[0] && m->right == w.right[0]);
  }
  // every restriction is C^1 at the point; collect the first derivatives
  std::size_t n = w.point.size();
  Matrix a;
  std::vector<Scalar> b;
  for (std::size_t i = 0; i < w.directions.size(); ++i) {
    auto m = jet_mismatch(w.f, w.point, w.directions[i], 1);
    if (!m || m->order != -1 || m->right.size() < 2) return false;
    if (w.directions[i].size() != n) return false;
    a.push_back(w.directions[i]);
    b.push_back(m->right[1]);
    if (i < w.right.size() && w.right[i].size() >= 2 && !(w.right[i][1] == m->right[1])) return false;
  }
  return !solve(a, b).has_value();
}

bool recheck(const OutsideCarrier& w) {
  std::optional<std::vector<Scalar>> y = std::vector<Scalar>{};
  for (const Expr& c : w.plot.components) {
    std::optional<Scalar> v;
    try {
      v = evaluate_exact(c, w.param);
    } catch (const EvalError&) {
      return false;
    }
    if (!v) {
      y.reset();
      break;
    }
    y->push_back(*v);
  }
  if (y) return !w.carrier.contains(*y);
  std::vector<double> yd;
  auto x = to_doubles(w.param);
  for (const Expr& c : w.plot.components) yd.push_back(evaluate(c, x));
  return !w.carrier.contains_approx(yd, 1e-6);
}

}  // namespace

bool recheck_witness(const Witness& w) {
  return std::visit([](const auto& x) { return recheck(x); }, w);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json exprs_json(const std::vector<Expr>& es) {
  json a = json::array();
  for (const Expr& e : es) a.push_back(e.str());
  return a;
}

json rows_json(const std::vector<std::vector<Scalar>>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(scalars_json(r));
  return a;
}

json divergence_json(const DivergenceRecord& d) {
  json j;
  j["point"] = scalars_json(d.point);
  j["direction"] = scalars_json(d.direction);
  j["order"] = d.order;
  j["quotients"] = json::array({d.quotients[0], d.quotients[1], d.quotients[2]});
  j["evaluable"] = d.evaluable;
  j["divergent"] = d.divergent;
  return j;
}

json to_json(const CompositionNotSmooth& w) {
  json j;
  j["f"] = w.f.str();
  j["plot"] = plot_to_json(w.plot);
  j["composite"] = w.composite.str();
  j["smoothness"] = smoothness_json(w.verdict);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

json to_json(const RankObstruction& w) {
  json j;
  j["plot"] = plot_to_json(w.plot);
  j["point"] = scalars_json(w.record.point);
  j["rank"] = w.record.rank;
  j["exact"] = w.record.exact;
  return j;
}

json to_json(const NoContinuousLift& w) {
  json j;
  j["plot"] = plot_to_json(w.plot);
  if (w.model == NoContinuousLift::Model::Loop) {
    j["model"] = "loop";
    j["invariants"] = exprs_json(w.invariants);
    j["center"] = scalars_json(w.center);
    j["radius"] = w.radius.str();
    j["samples"] = w.samples;
    j["holonomy"] = w.holonomy;
    j["separation"] = w.separation;
    j["max_step"] = w.max_step;
  } else {
    j["model"] = "branches";
    j["blocks"] = w.blocks;
    j["t0"] = w.t0.str();
    j["params"] = scalars_json(w.params);
    j["pieces"] = w.pieces;
  }
  return j;
}

json to_json(const NotLocallyConstant& w) {
  json j;
  j["plot"] = plot_to_json(w.plot);
  j["a"] = w.record.a.str();
  j["b"] = w.record.b.str();
  j["value_a"] = scalars_json(w.record.va);
  j["value_b"] = scalars_json(w.record.vb);
  j["reason"] = w.record.reason;
  return j;
}

json to_json(const TopologyObstruction& w) {
  json j;
  j["description"] = w.description;
  j["plot"] = plot_to_json(w.plot);
  j["point"] = scalars_json(w.point);
  j["direction"] = scalars_json(w.direction);
  j["left"] = scalars_json(w.left);
  j["right"] = scalars_json(w.right);
  j["slope"] = w.slope.str();
  j["invariant"] = w.invariant.str();
  return j;
}

json to_json(const JetObstruction& w) {
  json j;
  j["mode"] = w.mode == JetObstruction::Mode::OneSided ? "one-sided" : "inconsistent";
  j["f"] = w.f.str();
  j["point"] = scalars_json(w.point);
  j["directions"] = rows_json(w.directions);
  j["order"] = w.order;
  j["left"] = rows_json(w.left);
  j["right"] = rows_json(w.right);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

json to_json(const OutsideCarrier& w) {
  json j;
  j["plot"] = plot_to_json(w.plot);
  j["param"] = scalars_json(w.param);
  return j;
}

}  // namespace

json smoothness_json(const SmoothnessVerdict& v) {
  json j;
  j["status"] = smooth_status_name(v.status);
  if (v.smooth()) j["trace"] = v.trace;
  if (v.not_ck()) {
    j["point"] = scalars_json(v.point);
    j["direction"] = scalars_json(v.direction);
    j["order"] = v.order;
    if (v.jets) {
      json jj;
      jj["order"] = v.jets->order;
      jj["left"] = scalars_json(v.jets->left);
      jj["right"] = scalars_json(v.jets->right);
      if (v.jets->value) jj["value"] = v.jets->value->str();
      j["jets"] = jj;
    }
    if (v.divergence) j["probe"] = divergence_json(*v.divergence);
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

json witness_json(const Witness& w) {
  json j;
  j["kind"] = witness_kind(w);
  j["data"] = std::visit([](const auto& x) { return to_json(x); }, w);
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["outcome"] = outcome_name(v.outcome);
  if (!v.certificate.empty()) j["certificate"] = v.certificate;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

}  // namespace smoothkit
