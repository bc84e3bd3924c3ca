#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothkit/invring.hpp"
#include "smoothkit/presentation.hpp"
#include "smoothkit/verdict.hpp"

namespace smoothkit {

enum class Identification { Group, Flow, Gluing };

/// A quotient of `base`. Functions are stored as pullbacks to the base
/// (invariant expressions), plots as representatives (pi o base plots).
struct QuotientPresentation {
  SpacePresentation base;
  Identification kind = Identification::Group;
  FiniteMatrixGroup group;
  Scalar slope;
  int degree_bound = 0;
  std::vector<Expr> fn_generators;
  std::vector<PlotGen> plot_generators;
  std::string note;

  /// The quotient as a presentation with construction "quotient".
  SpacePresentation presentation() const;
};

/// Invariant generators up to `degree` (or the supplied ones, checked
/// exactly). Throws std::invalid_argument on a non-invariant generator.
QuotientPresentation quotient_differential(const SpacePresentation& x, const FiniteMatrixGroup& g,
                                           int degree, std::vector<Expr> supplied = {});
/// Flow quotient of the 2-torus: only the constants survive.
QuotientPresentation quotient_differential_flow(const SpacePresentation& x, const Scalar& slope);
QuotientPresentation quotient_diffeology(const SpacePresentation& x, const FiniteMatrixGroup& g);
QuotientPresentation quotient_diffeology_flow(const SpacePresentation& x, const Scalar& slope);
/// Wedge of Euclidean pieces at their origins, with the plots pi o I_i.
QuotientPresentation wedge_quotient(const std::vector<int>& piece_dims);

/// f is flow invariant: df/dx + slope df/dy == 0 exactly.
bool flow_invariant(const Expr& f, const Scalar& slope);

/// Subset structures induced from a Euclidean ambient space.
SpacePresentation subset_differential(const SpacePresentation& x, const Carrier& y);
SpacePresentation subset_diffeology(const SpacePresentation& x, const Carrier& y);

/// sq(x) = (x_1^2, ..., x_n^2).
std::vector<Expr> square_map(int n);
/// f in C^oo(R^n_{>=0}) iff f o sq is smooth.
Verdict orthant_membership(const Expr& f, int n);
/// Same test for a function given only by its pullback g = f o sq; g must
/// be invariant under sign flips (std::invalid_argument otherwise).
Verdict orthant_membership_pullback(const Expr& g, int n);

/// Loop tracking for an invariant-coordinate plot of R^n / G. `invariants`
/// are the coordinates the plot is written in.
struct LiftResult {
  std::optional<NoContinuousLift> witness;
  std::string reason;
};
LiftResult lift_witness(const PlotGen& p, const FiniteMatrixGroup& g,
                        const std::vector<Expr>& invariants, const std::vector<Scalar>& center,
                        const Scalar& radius, int samples = 360);
/// Branch jump of a wedge plot (block model) at parameter t0.
LiftResult lift_witness_wedge(const PlotGen& p, const std::vector<int>& blocks, const Scalar& t0);
bool recheck_lift(const NoContinuousLift& w);

/// e in x0 with every abs/cases replaced by the branch in force just to
/// one side of t0; nullopt when a guard's sign there is undecided.
std::optional<Expr> resolve_side(const Expr& e, const Scalar& t0, int side);

/// Jump of a plot into the flow quotient across a guard locus; witness when
/// the invariant dy - slope dx is outside Z + slope Z.
std::optional<TopologyObstruction> step_obstruction(const PlotGen& p, const Scalar& slope);
bool recheck_step(const TopologyObstruction& w);

struct TorusReport {
  int degree = 0;
  int basis_size = 0;     // real trig basis with |m|, |n| <= N
  int dimension = 0;      // invariant subspace
  std::string note;
};
/// Throws std::invalid_argument for rational alpha or N < 1.
TorusReport torus_invariants(const Scalar& alpha, int n);

/// f = sum c_k prod gens^e as an exact polynomial in the generators, when
/// such an expression exists (degree-bounded linear algebra).
std::optional<Expr> express_in_generators(const Expr& f, const std::vector<Expr>& gens, int n);

/// Zadka's plot of R^2 / {+-I} in the coordinates (x^2, xy, y^2).
PlotGen zadka_plot();

}  // namespace smoothkit
