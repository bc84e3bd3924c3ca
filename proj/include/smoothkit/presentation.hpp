#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"
#include "smoothkit/interval.hpp"
#include "smoothkit/linalg.hpp"

namespace smoothkit {

/// Load-time validation failure; `path` is a JSON pointer into the document.
struct PresentationError : std::runtime_error {
  PresentationError(const std::string& p, const std::string& msg)
      : std::runtime_error(p + ": " + msg), path(p) {}
  std::string path;
};

/// Open box with rational (possibly infinite) endpoints.
struct Domain {
  std::vector<std::optional<Scalar>> lo, hi;  // nullopt = unbounded

  static Domain all(int dims);
  int dims() const { return static_cast<int>(lo.size()); }
  Box box() const;
  bool operator==(const Domain&) const = default;
};

struct PlotGen {
  bool all_smooth_curves = false;  // the wire schema; no components
  /// Components are the fn generators of a quotient by a group evaluated on
  /// orbits (used for plots with no smooth lift, e.g. the Zadka plot).
  bool orbit_coords = false;
  Domain domain;
  std::vector<Expr> components;

  static PlotGen curves_schema() {
    PlotGen p;
    p.all_smooth_curves = true;
    return p;
  }
  static PlotGen make(std::vector<Expr> comps, int dims);
  static PlotGen make(std::vector<Expr> comps, Domain d);
  int dims() const { return domain.dims(); }
  int target_dim() const { return static_cast<int>(components.size()); }
};

class FiniteMatrixGroup {
 public:
  FiniteMatrixGroup() = default;
  /// Validates identity, closure under product and inverse, orthogonality.
  /// Throws PresentationError rooted at `path`.
  static FiniteMatrixGroup make(std::vector<Matrix> elements, const std::string& path = "");
  static FiniteMatrixGroup trivial(int n);
  static FiniteMatrixGroup sign_flips(int n);  // (Z2)^n
  static FiniteMatrixGroup plus_minus(int n);  // {I, -I}

  int dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Matrix>& elements() const { return elements_; }
  /// e o g for the linear substitution x -> g x.
  Expr act(const Expr& e, const Matrix& g) const;

 private:
  int dim_ = 0;
  std::vector<Matrix> elements_;
};

enum class CarrierKind { Euclidean, Subset, QuotientByGroup, QuotientByFlow, Wedge };

struct Carrier {
  CarrierKind kind = CarrierKind::Euclidean;
  int dim = 1;  // ambient dimension of representatives
  // Subset: equations e = 0, inequalities e >= 0
  std::vector<Expr> equations;
  std::vector<Expr> inequalities;
  std::optional<std::vector<Expr>> ideal_generators;
  std::vector<PlotGen> parametrizations;
  bool rational_points = false;  // the Q-in-R model; totally disconnected
  // QuotientByGroup
  std::shared_ptr<const Carrier> inner;
  FiniteMatrixGroup group;
  std::string group_source;  // file name when loaded from a path
  // QuotientByFlow on the 2-torus: [x, y] ~ [x + t, y + slope t]
  Scalar slope;
  // Wedge: pieces glued at basepoints, modelled in R^(sum of dims) with
  // piece i on its own block of coordinates and all basepoints at 0
  std::vector<Carrier> pieces;
  std::vector<std::vector<Scalar>> basepoints;

  static Carrier euclidean(int n);
  bool totally_disconnected() const { return kind == CarrierKind::Subset && rational_points; }
  /// Sampled membership of an ambient point (exact where possible).
  bool contains(std::span<const Scalar> x) const;
  bool contains_approx(std::span<const double> x, double tol = 1e-9) const;
};

struct SpacePresentation {
  std::string label;
  Carrier carrier;
  std::vector<Expr> fn_generators;
  std::vector<PlotGen> plot_generators;
  /// How the structure was produced: "" (finite presentation), "pi" (plots
  /// of a function family), "phi" (functions of a plot family), "standard".
  std::string construction;

  int dim() const { return carrier.dim; }
};

/// n >= 1: R^n with its coordinate functions and the identity plot.
SpacePresentation standard_space(int n);

/// Parses and validates. Relative group paths resolve against base_dir.
SpacePresentation load_presentation(std::string_view json_text, const std::string& base_dir = ".");
SpacePresentation load_presentation_file(const std::string& path);
/// Canonical JSON text (fixed field order, scalars as strings).
std::string save_presentation(const SpacePresentation& p);

FiniteMatrixGroup load_group(std::string_view json_text, const std::string& path = "");
FiniteMatrixGroup load_group_file(const std::string& path);
std::string save_group(const FiniteMatrixGroup& g);

struct CompatibilityReport {
  int pairs = 0;
  int certified = 0;
  int unknown = 0;
};

/// Type invariants that need the certifier: generator compatibility and
/// sampled plot images. Throws PresentationError on a certified conflict.
CompatibilityReport validate_presentation(const SpacePresentation& p);

/// Deterministic rational sample points of a domain (bounded pieces of
/// unbounded sides are clipped to [-2, 2]).
std::vector<std::vector<Scalar>> sample_domain(const Domain& d, int count, std::uint64_t seed);

}  // namespace smoothkit
