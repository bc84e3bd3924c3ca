// smoothkit command line: gallery runs and single membership checks.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smoothkit/gallery.hpp"
#include "smoothkit/invariants.hpp"
#include "smoothkit/invring.hpp"

using namespace smoothkit;

namespace {

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SMOOTHKIT_SEED"); s && *s) return std::strtoull(s, nullptr, 10);
  return 42;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Scalar> parse_csv(const std::string& csv) {
  std::vector<Scalar> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Scalar::parse(item));
  return out;
}

int verdict_exit(const Verdict& v) { return v.is_unknown() ? 2 : 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothkit: certified membership for diffeological and differential spaces"};
  app.require_subcommand(1);

  auto* gallery = app.add_subcommand("gallery", "reproduce the example catalogue");
  gallery->require_subcommand(1);
  auto* run = gallery->add_subcommand("run", "run catalogue items");
  std::string filter, json_path;
  std::uint64_t seed = default_seed();
  int jobs = 1;
  bool runtimes = false;
  run->add_option("--filter", filter, "glob on item ids");
  run->add_option("--seed", seed, "RNG seed (default 42, or SMOOTHKIT_SEED)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--json", json_path, "write the canonical JSON report here");
  run->add_flag("--runtimes", runtimes, "include runtimes in the JSON (not byte-stable)");

  auto* tangent = app.add_subcommand("tangent-dim", "Zariski tangent dimension at a point");
  std::string space_file, point_csv;
  tangent->add_option("--space", space_file, "presentation JSON")->required();
  tangent->add_option("--point", point_csv, "comma-separated exact coordinates")->required();

  auto* invr = app.add_subcommand("invring", "invariant ring generators of a finite group");
  std::string group_file, out_file;
  int degree = 0;
  invr->add_option("--group", group_file, "group JSON")->required();
  invr->add_option("--degree", degree, "degree bound")->required()->check(CLI::PositiveNumber);
  invr->add_option("--out", out_file, "write the generator list here");

  auto* check = app.add_subcommand("check", "is a function or plot in the structure of a space");
  std::string fn_text, plot_file;
  check->add_option("--space", space_file, "presentation JSON")->required();
  auto* fo = check->add_option("--function", fn_text, "expression in x0, x1, ...");
  auto* po = check->add_option("--plot", plot_file, "plot JSON");
  fo->excludes(po);
  po->excludes(fo);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      GallerySummary s = run_all(filter, seed, jobs);
      for (const Report& r : s.reports)
        std::cout << r.id << ": " << report_status_name(r.status()) << " (reflexivity "
                  << reflexivity_name(r.reflexivity.status) << ")\n";
      std::cout << "reports " << s.reports.size() << ", AllCertified " << s.all_certified << ", HasRefutations "
                << s.has_refutations << ", HasUnknown " << s.has_unknown << ", Failed " << s.failed << "\n";
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << s.to_json(runtimes).dump(2) << "\n";
      }
      return s.exit_code();
    }
    if (tangent->parsed()) {
      SpacePresentation x = load_presentation_file(space_file);
      TangentReport t = zariski_tangent_dim(x.carrier, parse_csv(point_csv));
      json j{{"point", scalars_json(t.point)},
             {"ambient_dim", t.ambient_dim},
             {"jacobian_rank", t.jacobian_rank},
             {"tangent_dim", t.tangent_dim},
             {"assumption", t.assumption_note}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (invr->parsed()) {
      FiniteMatrixGroup g = load_group_file(group_file);
      json gens = json::array();
      for (const Expr& e : invariant_generators(g, degree)) gens.push_back(e.str());
      if (out_file.empty()) {
        std::cout << gens.dump(2) << "\n";
      } else {
        std::ofstream(out_file) << gens.dump(2) << "\n";
        std::cout << gens.size() << " generators, complete up to degree " << degree << "\n";
      }
      return 0;
    }
    if (check->parsed()) {
      if (fn_text.empty() && plot_file.empty()) {
        std::cerr << "check: one of --function or --plot is required\n";
        return 1;
      }
      SpacePresentation x = load_presentation_file(space_file);
      Verdict v = fn_text.empty() ? plot_member(x, plot_from_json(json::parse(slurp(plot_file)), x.dim()))
                                  : function_member(x, parse_expr(fn_text, x.dim()));
      std::cout << verdict_json(v).dump(2) << "\n";
      return verdict_exit(v);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
