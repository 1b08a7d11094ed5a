// Command-line front end: scenario runs, the acceptance suite and quick probes.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "cosob/acceptance.hpp"
#include "cosob/chart.hpp"
#include "cosob/energy.hpp"
#include "cosob/error.hpp"
#include "cosob/gallery.hpp"
#include "cosob/scenario.hpp"

namespace fs = std::filesystem;
using namespace cosob;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

int cmd_run(const std::string& path, const std::optional<std::string>& out_dir, int threads, bool timing) {
  const Scenario s = load_scenario(path);
  const ScenarioReport rep = run_scenario(s, {threads, timing});
  const fs::path dir = out_dir ? *out_dir : s.output_dir.value_or("reports");
  write_file(dir / (s.id + ".csv"), rep.to_csv(timing));
  write_file(dir / (s.id + ".json"), rep.to_json(timing));
  for (const auto& r : rep.rows)
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.check_id << ": " << r.classification
              << (r.value.empty() ? "" : " (" + r.value + ")") << ", expected " << r.expected << "\n";
  std::cout << s.id << ": " << rep.rows.size() << " analyses, " << (rep.all_pass() ? "all passed" : "FAILURES")
            << "; reports in " << dir.string() << "\n";
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

int cmd_verify(int threads, const std::optional<std::string>& out_dir, const std::string& fault, bool timing) {
  if (!fault.empty()) {
    if (fault != "christoffel-sign") throw ConfigError("unknown fault: " + fault);
    testing::inject_christoffel_sign_fault(true);
  }
  AcceptanceOptions opts;
  opts.threads = threads;
  const AcceptanceReport rep = run_acceptance(opts);
  const std::string text = rep.to_text(timing);
  std::cout << text;
  if (out_dir) {
    write_file(fs::path(*out_dir) / "verify.txt", text);
    write_file(fs::path(*out_dir) / "verify.json", rep.to_json(timing));
  }
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

int cmd_norm_compose(int pairs, std::uint64_t seed) {
  const NormComposeSummary s = norm_compose_check(pairs, seed);
  nlohmann::ordered_json j;
  j["pairs"] = s.pairs;
  j["seed"] = seed;
  j["violations"] = s.violations;
  j["worst_ratio"] = s.worst_ratio;
  std::cout << j.dump(2) << "\n";
  return s.violations == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_energy(const ExampleFamily& f, int order, double exponent, QuadratureSpec q) {
  if (f.id == FamilyId::GeodesicWind) q.kind = DomainKind::Circle;
  const EnergyReport e = energy(make_example(f), order, exponent, q);
  std::cout << nlohmann::ordered_json::parse(e.to_json()).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic higher-order Sobolev calculus: scenario runner and acceptance suite"};
  app.require_subcommand(1);

  int threads = 0;
  bool timing = false;
  std::optional<std::string> out_dir;

  auto* run = app.add_subcommand("run", "Run a JSON scenario and write CSV and JSON reports");
  std::string scenario_path;
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Report directory (default: scenario output.dir or ./reports)");
  run->add_option("--threads", threads, "Worker count (default: COSOB_THREADS or hardware)")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "Fill the runtime_ms column (reports are then not reproducible)");

  auto* verify = app.add_subcommand("verify", "Run every acceptance criterion");
  std::string fault;
  verify->add_option("--threads", threads, "Worker count")->check(CLI::PositiveNumber);
  verify->add_option("--out", out_dir, "Write verify.txt and verify.json here");
  verify->add_option("--inject-fault", fault, "Mutation hook: christoffel-sign");
  verify->add_flag("--timing", timing, "Include runtimes in the report");

  auto* compose = app.add_subcommand("norm-compose", "Check submultiplicativity on random double morphisms");
  int pairs = 1000;
  std::uint64_t seed = 1;
  compose->add_option("--random", pairs, "Number of random pairs")->check(CLI::PositiveNumber);
  compose->add_option("--seed", seed, "Random seed");

  auto* en = app.add_subcommand("energy", "Integrate |D^j_K u|^q for a gallery family");
  std::string family_id;
  ExampleFamily fam;
  int order = 1;
  double exponent = 2.0;
  QuadratureSpec q;
  en->add_option("--family", family_id, "Family id")->required();
  en->add_option("--alpha", fam.alpha, "alpha");
  en->add_option("--beta", fam.beta, "beta");
  en->add_option("--ell", fam.ell, "ell");
  en->add_option("--m", fam.m, "Domain dimension");
  en->add_option("--order", order, "Derivative order j")->required();
  en->add_option("--exponent", exponent, "Exponent q")->required();
  en->add_option("--radius", q.r, "Ball radius");
  en->add_option("--n-annuli", q.n_annuli, "Number of dyadic annuli");
  en->add_option("--radial-nodes", q.radial_nodes, "Gauss-Legendre nodes per annulus");
  en->add_option("--angular-nodes", q.angular_nodes, "Angular nodes");
  en->add_option("--threads", threads, "Worker count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (*run) return cmd_run(scenario_path, out_dir, threads, timing);
    if (*verify) return cmd_verify(threads, out_dir, fault, timing);
    if (*compose) return cmd_norm_compose(pairs, seed);
    if (*en) {
      fam.id = parse_family(family_id);
      q.threads = threads;
      q.validate();
      return cmd_energy(fam, order, exponent, q);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const UnsupportedOrder& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
