#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"
#include "smoothkit/interval.hpp"
#include "smoothkit/probe.hpp"

namespace smoothkit {

enum class Outcome { Yes, No, Unknown };
std::string_view outcome_name(Outcome o);

enum class SmoothStatus { Smooth, NotCk, Unknown };
std::string_view smooth_status_name(SmoothStatus s);

/// One-sided derivative mismatch along a line, exact.
struct JetMismatch {
  int order = 0;
  std::vector<Scalar> left;   // derivatives 0..order from s < 0
  std::vector<Scalar> right;  // derivatives 0..order from s > 0
  std::optional<Scalar> value;  // e at the point itself, when exact
};

/// First order <= `order` where the exact one-sided jets of
/// s -> e(point + s dir) (or the value at s = 0) disagree; order -1 when
/// they agree throughout. nullopt when no exact expansion exists.
std::optional<JetMismatch> jet_mismatch(const Expr& e, std::span<const Scalar> point,
                                        std::span<const Scalar> dir, int order);

struct SmoothnessVerdict {
  SmoothStatus status = SmoothStatus::Unknown;
  /// Rules applied, outermost first (CertifiedSmooth only).
  std::vector<std::string> trace;
  // CertifiedNotCk: the line through `point` along `direction` on which e
  // fails to be C^order.
  std::vector<Scalar> point;
  std::vector<Scalar> direction;
  int order = -1;
  std::optional<JetMismatch> jets;
  std::optional<DivergenceRecord> divergence;
  std::string reason;

  bool smooth() const { return status == SmoothStatus::Smooth; }
  bool not_ck() const { return status == SmoothStatus::NotCk; }
};

/// Sound, incomplete smoothness certification on an open box.
///  R1: no abs/cases/recip/norm.
///  R2: flat(w) * m with m built from pieces that are smooth off zeros(w)
///      and blow up at most polynomially in 1/|w| there.
///  R3: cases(g; a, b, c) whose branches agree off a part that is
///      flat-dominated along zeros(g), with b matching the common part.
/// Recip/abs/norm/cases whose guard has a certified sign on the region
/// are resolved by interval arithmetic. Failing that, a NotCk witness is
/// searched on guard loci along seeded rational lines (exact one-sided jets
/// first, then the finite-difference probe).
SmoothnessVerdict certify_smooth(const Expr& e, const Box& region);
SmoothnessVerdict certify_smooth(const Expr& e, int dim);

/// True when the symbolic part of a smoothness certificate can be rebuilt
/// (no witness search). Used by the phi/pi machinery for cheap checks.
bool certified_smooth_quick(const Expr& e, const Box& region);

/// Re-verifies a CertifiedNotCk verdict from its witness data alone.
bool recheck_not_ck(const Expr& e, const SmoothnessVerdict& v);

/// Candidate points on the guard loci of e inside the region, with the
/// line direction used to reach them. Deterministic.
struct LocusPoint {
  std::vector<Scalar> point;
  std::vector<Scalar> direction;
  bool exact = false;
};
std::vector<LocusPoint> guard_locus_points(const Expr& e, const Box& region);

struct CkVerdict {
  Outcome result = Outcome::Unknown;
  /// First order at which the one-sided derivatives differ (-1: none up to k+1).
  int mismatch_order = -1;
  std::vector<Scalar> left;
  std::vector<Scalar> right;
  std::optional<Scalar> value;
  std::optional<DivergenceRecord> divergence;  // probe at order k+1
  std::string reason;
};

/// Is the univariate e C^k at `point` but not C^(k+1)? Compares exact
/// one-sided jets up to order k+1.
CkVerdict ck_regularity(const Expr& e, int k, const Scalar& point);

}  // namespace smoothkit
