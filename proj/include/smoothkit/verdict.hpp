#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smoothkit/invariants.hpp"
#include "smoothkit/json_io.hpp"
#include "smoothkit/presentation.hpp"
#include "smoothkit/smoothness.hpp"

namespace smoothkit {

/// f o p fails to be smooth; `verdict` is the CertifiedNotCk of `composite`.
struct CompositionNotSmooth {
  Expr f;
  PlotGen plot;
  Expr composite;
  SmoothnessVerdict verdict;
  std::string note;  // why f (or p) belongs to its family
};

/// The plot has Jacobian rank >= 2 somewhere, so it cannot locally factor
/// through curves.
struct RankObstruction {
  PlotGen plot;
  RankRecord record;
};

/// Branch tracking of a quotient plot. Two models:
///  - Loop: invariant-coordinate plot of R^n / G traced around a circle;
///    a representative is followed by nearest orbit point and comes back
///    moved by the non-identity element `holonomy`.
///  - Branches: a plot of a wedge (block model) whose values sit off the
///    basepoint in two different pieces on either side of `t0`,
///    arbitrarily close to t0.
struct NoContinuousLift {
  enum class Model { Loop, Branches };
  Model model = Model::Loop;
  PlotGen plot;
  // Loop
  FiniteMatrixGroup group;
  std::vector<Expr> invariants;  // Hilbert map generators
  std::vector<Scalar> center;
  Scalar radius;
  int samples = 0;
  int holonomy = -1;        // index into group.elements()
  double separation = 0;    // min distance between distinct orbit points on the loop
  double max_step = 0;      // largest move of the tracked representative
  // Branches
  std::vector<int> blocks;  // piece dimensions
  Scalar t0;
  std::vector<Scalar> params;
  std::vector<int> pieces;  // piece hit at params[i], -1 = basepoint
};

struct NotLocallyConstant {
  PlotGen plot;
  Carrier target;
  ConstancyRecord record;
};

/// Step plot into the flow quotient: the one-sided limits at a guard
/// point differ by (dx, dy) with dy - slope dx outside Z + slope Z.
struct TopologyObstruction {
  std::string description;
  PlotGen plot;
  std::vector<Scalar> point, direction;
  std::vector<Scalar> left, right;  // one-sided limits of each component
  Scalar slope;
  Scalar invariant;  // dy - slope dx
};

/// Jet data of a function restricted to lines through a point.
///  - OneSided: on line 0 the derivatives from the two sides differ at
///    `order` (order 0: the one-sided limits differ).
///  - Inconsistent: each restriction is differentiable at the point but
///    no linear form takes the first derivatives on all directions.
struct JetObstruction {
  enum class Mode { OneSided, Inconsistent };
  Mode mode = Mode::OneSided;
  Expr f;
  std::vector<Scalar> point;
  std::vector<std::vector<Scalar>> directions;
  int order = 0;
  std::vector<std::vector<Scalar>> left, right;  // per direction, derivatives 0..order
  std::string note;
};

/// The plot leaves the carrier at a parameter.
struct OutsideCarrier {
  PlotGen plot;
  Carrier carrier;
  std::vector<Scalar> param;
};

using Witness = std::variant<CompositionNotSmooth, RankObstruction, NoContinuousLift,
                             NotLocallyConstant, TopologyObstruction, JetObstruction,
                             OutsideCarrier>;

std::string_view witness_kind(const Witness& w);
/// Re-derives the refutation from the witness data alone.
bool recheck_witness(const Witness& w);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::vector<std::string> certificate;  // CertifiedYes
  std::optional<Witness> witness;        // CertifiedNo
  std::string reason;

  static Verdict yes(std::vector<std::string> cert);
  static Verdict no(Witness w, std::string reason);
  static Verdict unknown(std::string reason);

  bool is_yes() const { return outcome == Outcome::Yes; }
  bool is_no() const { return outcome == Outcome::No; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }
};

/// Yes and No disagree; Unknown never contradicts.
bool contradicts(const Verdict& a, const Verdict& b);

json smoothness_json(const SmoothnessVerdict& v);
json witness_json(const Witness& w);
json verdict_json(const Verdict& v);

}  // namespace smoothkit
