#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"

namespace smoothkit {

inline constexpr std::array<double, 3> kProbeSteps = {1e-2, 1e-3, 1e-4};
inline constexpr double kGrowthFactor = 10.0;
inline constexpr int kMaxProbeOrder = 4;

/// Finite-difference record along the line s -> e(point + s * direction).
/// Order 0 measures a jump: max(|g(h) - g(-h)|, |2 g(0) - g(h) - g(-h)|) / h.
/// Order m >= 1 takes G = D^(m-1) g symbolically and measures a kink with
/// |G(2h) - G(h) - G(-h) + G(-2h)| / h^2, which stays bounded when G is C^2
/// and grows like 1/h when the m-th derivative jumps. The stencil never
/// touches s = 0 for m >= 1.
struct DivergenceRecord {
  std::vector<Scalar> point;
  std::vector<Scalar> direction;
  int order = 0;
  std::array<double, 3> quotients{};
  bool evaluable = true;
  bool divergent = false;

  double growth() const;
};

DivergenceRecord probe_order(const Expr& e, std::span<const Scalar> point,
                             std::span<const Scalar> direction, int order);

/// Orders 0..max_order in turn; the first divergent record, if any.
std::optional<DivergenceRecord> first_divergence(const Expr& e, std::span<const Scalar> point,
                                                 std::span<const Scalar> direction,
                                                 int max_order = kMaxProbeOrder);

/// Recomputes the record from its own point, direction and order.
bool recheck_divergence(const Expr& e, const DivergenceRecord& r);

struct ProbeTask {
  std::vector<Scalar> point;
  std::vector<Scalar> direction;
};

/// Batch kernels over many probe lines; entry i is first_divergence for
/// task i. The parallel variant uses OpenMP and returns identical results.
std::vector<std::optional<DivergenceRecord>> probe_batch_serial(const Expr& e,
                                                                std::span<const ProbeTask> tasks,
                                                                int max_order = kMaxProbeOrder);
std::vector<std::optional<DivergenceRecord>> probe_batch_parallel(
    const Expr& e, std::span<const ProbeTask> tasks, int max_order = kMaxProbeOrder);

}  // namespace smoothkit
