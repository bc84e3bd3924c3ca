#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothkit/expr.hpp"
#include "smoothkit/linalg.hpp"
#include "smoothkit/presentation.hpp"

namespace smoothkit {

struct TangentReport {
  std::vector<Scalar> point;
  int ambient_dim = 0;
  int jacobian_rank = 0;
  int tangent_dim = 0;
  std::string assumption_note;
};

/// n - rank of the Jacobian of the ideal generators at the point, exactly.
/// Throws std::invalid_argument when the point is off the subset or the
/// carrier has no ideal generators.
TangentReport zariski_tangent_dim(const Carrier& subset, const std::vector<Scalar>& point);

struct RankRecord {
  std::vector<Scalar> point;
  int rank = 0;
  bool exact = false;  // rank from exact entries; else numeric at 1e-8
};

/// Jacobian rank of p at a point; nullopt when some entry is undefined there.
std::optional<RankRecord> jacobian_rank_at(const PlotGen& p, const std::vector<Scalar>& point);

/// First sampled point with Jacobian rank >= 2. The first candidate is
/// (1, 0, ..., 0) clipped into the domain, then seeded samples.
std::optional<RankRecord> rank_obstruction(const PlotGen& p, int samples, std::uint64_t seed);

enum class ConstancyStatus { NotLocallyConstant, ConfirmedLocallyConstant, Unknown };

struct ConstancyRecord {
  ConstancyStatus status = ConstancyStatus::Unknown;
  Scalar a, b;              // parameters
  std::vector<Scalar> va, vb;  // exact values there
  std::string reason;
};

/// For curves into a totally disconnected subset (the Q model).
ConstancyRecord locally_constant_check(const PlotGen& p, const Carrier& target);

/// Slope in Q(sqrt2) or infinity; the line b x = a y through [a : b].
struct Slope {
  bool infinite = false;
  Scalar value;
  static Slope parse(std::string_view s);
  std::string str() const;
  std::vector<Scalar> direction() const;  // (1, m) or (0, 1)
  bool operator==(const Slope& o) const;
};

struct EquivalenceCertificate {
  bool equivalent = false;
  Matrix matrix;                   // M with M(line A_i) = line B_perm[i]
  std::vector<std::size_t> permutation;
  std::size_t permutations_tried = 0;
};

EquivalenceCertificate lines_equivalence(const std::vector<Slope>& a, const std::vector<Slope>& b);

/// Independent check of a certificate.
bool verify_equivalence(const std::vector<Slope>& a, const std::vector<Slope>& b,
                        const EquivalenceCertificate& c);

/// Image of an arrangement under an invertible matrix.
std::vector<Slope> transform_arrangement(const std::vector<Slope>& a, const Matrix& m);

std::vector<Slope> load_arrangement(std::string_view json_text);

}  // namespace smoothkit
