#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smoothkit/galois.hpp"
#include "smoothkit/json_io.hpp"

namespace smoothkit {

/// One checked statement of a gallery item.
struct Claim {
  std::string text;
  std::string anchor;  // which example of the catalogue it reproduces
  Outcome expected = Outcome::Yes;
  Verdict verdict;
  json data = json::object();  // residuals, counts
  double runtime_ms = 0;
  bool cited = false;        // recorded, not checked
  bool check_failed = false; // boolean checks that did not hold

  bool failed() const;        // contradicts the expectation
  bool unexpected_unknown() const;
};

/// HasRefutations: a certified non-reflexivity witness, as expected.
enum class ReportStatus { AllCertified, HasRefutations, HasUnknown, Failed };
std::string_view report_status_name(ReportStatus s);

struct Report {
  std::string id;
  std::string title;
  std::vector<Claim> claims;
  Reflexivity expected_reflexivity = Reflexivity::Unknown;
  ReflexivityReport reflexivity;
  double runtime_ms = 0;

  ReportStatus status() const;
  /// Canonical JSON; runtimes only when asked for.
  json to_json(bool with_runtimes = false) const;
};

/// Catalogue ids in run order.
const std::vector<std::string>& gallery_ids();

/// Throws std::invalid_argument for an unknown id.
Report run_example(const std::string& id, std::uint64_t seed = 42);

struct GallerySummary {
  std::vector<Report> reports;
  int all_certified = 0, has_refutations = 0, has_unknown = 0, failed = 0;
  json to_json(bool with_runtimes = false) const;
  /// 0 ok, 1 any Failed, 2 Unknown where a certified verdict was expected.
  int exit_code() const;
};

/// `filter` is a glob on ids (empty = all). Items run on `jobs` threads;
/// the result does not depend on `jobs`.
GallerySummary run_all(const std::string& filter, std::uint64_t seed, int jobs = 1);

/// Data directory (SMOOTHKIT_DATA overrides the built-in path).
std::string data_path(const std::string& rel);

}  // namespace smoothkit
