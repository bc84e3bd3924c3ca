#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smoothkit/presentation.hpp"
#include "smoothkit/verdict.hpp"

namespace smoothkit {

/// f in Phi D0: f o p certified smooth for each generator. For the
/// all-smooth-curves schema, f is Boman-probed and then certified directly.
/// `dim` is the carrier dimension. An empty D0 stands for the constant
/// plots only, so every function is a member.
Verdict phi_contains(const std::vector<PlotGen>& d0, const Expr& f, int dim,
                     std::uint64_t seed = 42);

/// p in Pi F0 on `carrier`: the carrier constraints hold and f o p is
/// certified smooth for each f. Plots in orbit coordinates compose with F0
/// through its own generators (component k is F0[k] on orbits).
Verdict pi_contains(const std::vector<Expr>& f0, const PlotGen& p, const Carrier& carrier);

/// pi_contains restricted to curves (1-dimensional domain).
Verdict gamma_curves(const std::vector<Expr>& f0, const PlotGen& c, const Carrier& carrier);

/// (f o p) o gamma for `probes` seeded curves: lines through the guard loci
/// first, then polynomials of degree <= 5 with an occasional flat term.
/// No on a failing curve; Yes only if f o p is certified directly; else
/// Unknown ("probes passed").
Verdict boman_smoothness(const Expr& f, const PlotGen& p, int probes, std::uint64_t seed);

/// Membership in the differential structure of X.
Verdict function_member(const SpacePresentation& x, const Expr& f);
/// Membership in the diffeology of X.
Verdict plot_member(const SpacePresentation& x, const PlotGen& p);

/// Pi F0 and Phi D0 as presentations (construction "pi" / "phi").
SpacePresentation pi_of(const std::vector<Expr>& f0, const Carrier& c, std::string label = "");
SpacePresentation phi_of(const std::vector<PlotGen>& d0, const Carrier& c, std::string label = "");

/// Test functions of Y used to check maps into it.
std::vector<Expr> test_functions(const SpacePresentation& y);

/// f o F in F_X for the test functions f of Y.
Verdict check_functionally_smooth(const std::vector<Expr>& F, const SpacePresentation& x,
                                  const SpacePresentation& y);

struct PlotwiseVerdict {
  Verdict overall;
  std::vector<Verdict> per_plot;
};
/// F o p in D_Y for the given plots of X (X's plot generators by default).
PlotwiseVerdict check_diffeologically_smooth(const std::vector<Expr>& F,
                                             const SpacePresentation& x,
                                             const SpacePresentation& y,
                                             std::optional<std::vector<PlotGen>> plots = {});

enum class Reflexivity { Reflexive, NonReflexive, Unknown };
std::string_view reflexivity_name(Reflexivity r);

struct ReflexivityReport {
  Reflexivity status = Reflexivity::Unknown;
  std::string argument;
  std::optional<PlotGen> plot;      // element of Pi Phi D minus D
  std::optional<Expr> function;     // element of Phi Pi F minus F
  std::optional<Verdict> in_roundtrip;
  std::optional<Verdict> in_original;
};

/// Reflexive for "pi", "phi" and "standard" constructions; Unknown otherwise.
ReflexivityReport reflexivity_report(const SpacePresentation& x);
/// Witness pairs. `roundtrip` is a presentation of Pi Phi D (resp. Phi Pi F).
ReflexivityReport nonreflexive_by_plot(const SpacePresentation& x,
                                       const SpacePresentation& roundtrip, const PlotGen& p);
ReflexivityReport nonreflexive_by_function(const SpacePresentation& x,
                                           const SpacePresentation& roundtrip, const Expr& f);

/// (Gamma F0, Phi Gamma F0) by membership procedures.
struct Frolicher {
  std::vector<Expr> f0;
  Carrier carrier;
  Verdict curve(const PlotGen& c) const;
  Verdict function(const Expr& f) const;
};
Frolicher frolicher_saturate(const std::vector<Expr>& f0, const Carrier& carrier);

/// Line t -> point + t dir as a curve.
PlotGen line_plot(const std::vector<Scalar>& point, const std::vector<Scalar>& dir);

struct LawTally {
  int comparisons = 0;
  int contradictions = 0;
  int unknown = 0;  // comparisons with an Unknown on some side
  double unknown_rate() const { return comparisons ? double(unknown) / comparisons : 0.0; }
};

struct LawReport {
  int presentations = 0;
  LawTally pi_phi_pi, phi_pi_phi, gamma_phi_gamma, functoriality;
  std::vector<std::string> contradictions;  // descriptions
  LawTally total() const;
};

/// Extensional law suites over seeded random presentations on R^2 with
/// pools of 10 functions and 10 plots each.
LawReport galois_law_suite(int presentations, std::uint64_t seed);

}  // namespace smoothkit
