// Gallery snapshot tests. Run with --update-golden to rewrite the snapshot.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "smoothkit/gallery.hpp"

using namespace smoothkit;

namespace {
const std::string kGolden = std::string(SMOOTHKIT_SOURCE_DIR) + "/tests/golden/gallery_seed42.json";
bool g_update = false;

const GallerySummary& seed42() {
  static const GallerySummary s = run_all("", 42, 1);
  return s;
}

const Claim* find_claim(const Report& r, const std::string& prefix) {
  for (const Claim& c : r.claims)
    if (c.text.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}
}  // namespace

TEST_CASE("seed 42 matches the pinned snapshot") {
  std::string now = seed42().to_json().dump(2) + "\n";
  if (g_update) {
    std::ofstream(kGolden) << now;
    MESSAGE("snapshot rewritten: " << kGolden);
    return;
  }
  std::ifstream in(kGolden);
  REQUIRE_MESSAGE(in.good(), "missing snapshot; run test_gallery --update-golden");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == now);
}

TEST_CASE("fourteen reports, none failed") {
  const GallerySummary& s = seed42();
  CHECK(s.reports.size() == 14);
  CHECK(s.failed == 0);
  CHECK(s.has_unknown == 0);
  CHECK(s.exit_code() == 0);
  for (const Report& r : s.reports) CHECK_MESSAGE(r.status() != ReportStatus::Failed, r.id);
}

TEST_CASE("reflexivity verdicts per item") {
  std::map<std::string, Reflexivity> want = {
      {"wire", Reflexivity::NonReflexive},           {"rationals", Reflexivity::NonReflexive},
      {"ck", Reflexivity::NonReflexive},             {"irrational_torus", Reflexivity::NonReflexive},
      {"orbifold_zadka", Reflexivity::NonReflexive}, {"wedge_two_axes", Reflexivity::NonReflexive},
      {"three_lines", Reflexivity::NonReflexive},    {"orthant", Reflexivity::Reflexive},
      {"corners", Reflexivity::Reflexive},           {"orthogonal_quotient", Reflexivity::Reflexive},
  };
  for (const Report& r : seed42().reports) {
    auto it = want.find(r.id);
    if (it == want.end()) continue;
    CHECK_MESSAGE(r.reflexivity.status == it->second, r.id);
    if (it->second == Reflexivity::NonReflexive) {
      REQUIRE(r.reflexivity.in_roundtrip);
      REQUIRE(r.reflexivity.in_original);
      CHECK(r.reflexivity.in_roundtrip->is_yes());
      CHECK(r.reflexivity.in_original->is_no());
    }
  }
}

TEST_CASE("run_example") {
  Report o = run_example("orthant");
  CHECK(o.status() == ReportStatus::AllCertified);
  Report t = run_example("three_lines");
  CHECK(t.status() == ReportStatus::HasRefutations);
  const Claim* s = find_claim(t, "Zariski tangent dimension of S");
  const Claim* e = find_claim(t, "Zariski tangent dimension of E");
  REQUIRE(s);
  REQUIRE(e);
  CHECK(s->data["tangent_dim"] == 2);
  CHECK(e->data["tangent_dim"] == 3);
  CHECK_THROWS_AS(run_example("nonexistent"), std::invalid_argument);
}

TEST_CASE("cited claims are listed, not checked") {
  int cited = 0;
  for (const Report& r : seed42().reports)
    for (const Claim& c : r.claims) cited += c.cited;
  CHECK(cited == 3);
}

TEST_CASE("filter and jobs") {
  CHECK(run_all("wire", 42, 1).reports.size() == 1);
  CHECK(run_all("w*", 42, 1).reports.size() == 2);
  CHECK(run_all("nothing*", 42, 1).reports.empty());
  GallerySummary p = run_all("", 42, 4);
  CHECK(p.to_json().dump() == seed42().to_json().dump());
}

int main(int argc, char** argv) {
  std::vector<char*> rest;
  for (int i = 0; i < argc; ++i) {
    if (std::strcmp(argv[i], "--update-golden") == 0) g_update = true;
    else rest.push_back(argv[i]);
  }
  doctest::Context ctx(static_cast<int>(rest.size()), rest.data());
  return ctx.run();
}
