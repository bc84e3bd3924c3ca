#include "smoothkit/probe.hpp"

#include <algorithm>
#include <cmath>

namespace smoothkit {

namespace {

// relative noise floor for the raw stencil value at the smallest step
constexpr double kNoiseFloor = 1e-9;

bool eval_at(const Expr& g, double s, double& out) {
  try {
    double x[1] = {s};
    out = evaluate(g, x);
    return std::isfinite(out);
  } catch (const EvalError&) {
    return false;
  }
}

}  // namespace

double DivergenceRecord::growth() const {
  if (quotients[0] <= 0) return quotients[2] > 0 ? INFINITY : 1.0;
  return quotients[2] / quotients[0];
}

DivergenceRecord probe_order(const Expr& e, std::span<const Scalar> point,
                             std::span<const Scalar> direction, int order) {
  DivergenceRecord rec;
  rec.point.assign(point.begin(), point.end());
  rec.direction.assign(direction.begin(), direction.end());
  rec.order = order;
  Expr g = restrict_to_line(e, point, direction);
  if (order >= 2) g = differentiate_n(g, 0, static_cast<unsigned>(order - 1)).expr;

  double scale = 0;
  double raw_last = 0;
  for (std::size_t i = 0; i < kProbeSteps.size(); ++i) {
    double h = kProbeSteps[i];
    double q = 0;
    if (order == 0) {
      double gp, gm, g0;
      if (!eval_at(g, h, gp) || !eval_at(g, -h, gm)) {
        rec.evaluable = false;
        return rec;
      }
      double raw = std::fabs(gp - gm);
      if (eval_at(g, 0.0, g0)) raw = std::max(raw, std::fabs(2 * g0 - gp - gm));
      scale = std::max({scale, std::fabs(gp), std::fabs(gm)});
      q = raw / h;
      raw_last = raw;
    } else {
      double v[4];
      const double at[4] = {2 * h, h, -h, -2 * h};
      for (int k = 0; k < 4; ++k) {
        if (!eval_at(g, at[k], v[k])) {
          rec.evaluable = false;
          return rec;
        }
        scale = std::max(scale, std::fabs(v[k]));
      }
      double raw = std::fabs(v[0] - v[1] - v[2] + v[3]);
      q = raw / (h * h);
      raw_last = raw;
    }
    rec.quotients[i] = q;
  }
  const auto& q = rec.quotients;
  // a genuine jump scales like 1/h, so every refinement must grow; a single
  // jump followed by saturation is a steep but smooth feature
  const double step = std::sqrt(kGrowthFactor);
  bool monotone = q[1] >= step * q[0] && q[2] >= step * q[1];
  bool grows = q[2] >= kGrowthFactor * q[0];
  bool above_noise = raw_last > kNoiseFloor * (1.0 + scale);
  rec.divergent = monotone && grows && above_noise;
  return rec;
}

std::optional<DivergenceRecord> first_divergence(const Expr& e, std::span<const Scalar> point,
                                                 std::span<const Scalar> direction,
                                                 int max_order) {
  for (int m = 0; m <= max_order; ++m) {
    DivergenceRecord r = probe_order(e, point, direction, m);
    if (r.divergent) return r;
    if (!r.evaluable) return std::nullopt;
  }
  return std::nullopt;
}

bool recheck_divergence(const Expr& e, const DivergenceRecord& r) {
  DivergenceRecord again = probe_order(e, r.point, r.direction, r.order);
  return again.divergent && again.quotients == r.quotients;
}

std::vector<std::optional<DivergenceRecord>> probe_batch_serial(const Expr& e,
                                                                std::span<const ProbeTask> tasks,
                                                                int max_order) {
  std::vector<std::optional<DivergenceRecord>> out(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    out[i] = first_divergence(e, tasks[i].point, tasks[i].direction, max_order);
  return out;
}

std::vector<std::optional<DivergenceRecord>> probe_batch_parallel(
    const Expr& e, std::span<const ProbeTask> tasks, int max_order) {
  std::vector<std::optional<DivergenceRecord>> out(tasks.size());
  const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    out[k] = first_divergence(e, tasks[k].point, tasks[k].direction, max_order);
  }
  return out;
}

}  // namespace smoothkit
