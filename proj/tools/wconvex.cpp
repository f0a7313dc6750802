// wconvex: run scenario files and one-off checks from the command line.
//
//   wconvex run <config|bundled-name> [--out FILE] [--workers N]
//   wconvex list [--json]
//   wconvex verify --space S --fn F --n N --seed K [--property P]
//   wconvex project --space S --set SET --x P
//   wconvex fixpoint --space S --map MAP --x0 P [--schedule T] [--trace FILE]
//
// Exit codes: 0 all passed or inconclusive, 1 a violation was found,
// 2 the configuration is invalid.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wconvex/scenario.hpp"

#ifndef WCONVEX_SCENARIO_DIR
#define WCONVEX_SCENARIO_DIR "scenarios"
#endif

namespace {

using wconvex::json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

std::string scenario_dir() {
  if (const char* env = std::getenv("WCONVEX_SCENARIOS")) return env;
  return WCONVEX_SCENARIO_DIR;
}

/// A path, or the name of a bundled scenario.
std::string resolve_config(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  const fs::path bundled = fs::path(scenario_dir()) / (arg + ".json");
  if (fs::exists(bundled)) return bundled.string();
  return arg;
}

void write_json(const json& report, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw wconvex::config_error("--out", "cannot write '" + out + "'");
  f << report.dump(2) << "\n";
}

int finish(const wconvex::SuiteReport& suite, const std::string& out) {
  write_json(wconvex::suite_to_json(suite), out);
  const auto failed = suite.count(wconvex::Status::failed);
  const auto inconclusive = suite.count(wconvex::Status::inconclusive);
  std::cerr << suite.name << ": " << suite.count(wconvex::Status::passed) << " passed, " << failed << " failed, "
            << inconclusive << " inconclusive\n";
  for (const auto& r : suite.scenarios) {
    for (std::size_t i = 0; i < r.tasks.size(); ++i) {
      const auto& t = r.tasks[i];
      if (t.status == wconvex::Status::passed) continue;
      std::cerr << "  " << (t.status == wconvex::Status::failed ? "FAIL " : "WARN ") << r.scenario << " task " << i
                << " " << t.kind << " " << t.label << "\n";
    }
  }
  return suite.any_failed() ? kExitViolation : kExitPass;
}

int run_single(const json& scenario, std::size_t workers, const std::string& out) {
  wconvex::RunSettings settings{workers};
  wconvex::SuiteReport suite = wconvex::run_config(scenario, settings);
  return finish(suite, out);
}

json scenario_shell(const std::string& name, const json& space, std::uint64_t seed) {
  return {{"schema_version", wconvex::kSchemaVersion}, {"name", name}, {"seed", seed}, {"space", space}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property checks and solvers on convex metric spaces"};
  app.set_version_flag("--version", std::string(WCONVEX_VERSION));
  app.require_subcommand(1);

  std::size_t workers = wconvex::default_workers();
  std::string out;

  auto* run = app.add_subcommand("run", "run a scenario or suite file");
  std::string config;
  run->add_option("config", config, "scenario file or bundled scenario name")->required();
  run->add_option("--out,-o", out, "report path (default: the config's output field, else stdout)");
  run->add_option("--workers,-j", workers, "worker threads (default: $WCONVEX_WORKERS or 1)")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "list spaces, functions, sets, maps and bundled scenarios");
  bool list_json = false;
  list->add_flag("--json", list_json, "print the catalogue as JSON");

  auto* verify = app.add_subcommand("verify", "run one verifier");
  std::string space_arg = "euclidean:2";
  std::string fn_arg = "dist";
  std::string property = "wconvex";
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  verify->add_option("--space", space_arg, "euclidean[:dim[:norm]], ball[:dim], interval or JSON")->required();
  verify->add_option("--fn", fn_arg, "dist[:g], neg_dist, lebesgue, ball_size or JSON");
  verify->add_option("--property", property, "verifier name (see list)");
  verify->add_option("--n", n, "samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "seed");
  verify->add_option("--out,-o", out, "report path");
  verify->add_option("--workers,-j", workers, "worker threads")->check(CLI::PositiveNumber);

  auto* project = app.add_subcommand("project", "metric projection onto a convex set");
  std::string set_arg;
  std::string x_arg;
  std::size_t starts = 4;
  project->add_option("--space", space_arg, "space")->required();
  project->add_option("--set", set_arg, "set as JSON")->required();
  project->add_option("--x", x_arg, "query point as JSON")->required();
  project->add_option("--starts", starts, "restarts")->check(CLI::PositiveNumber);
  project->add_option("--seed", seed, "seed");
  project->add_option("--out,-o", out, "report path");

  auto* fixpoint = app.add_subcommand("fixpoint", "Mann iteration for a map");
  std::string map_arg;
  std::string x0_arg;
  std::string schedule = "constant";
  std::string trace;
  double fp_tol = 1e-6;
  std::size_t max_iter = 100000;
  bool oracle = false;
  fixpoint->add_option("--space", space_arg, "space")->required();
  fixpoint->add_option("--map", map_arg, "map as JSON")->required();
  fixpoint->add_option("--x0", x0_arg, "start point as JSON (default: origin)");
  fixpoint->add_option("--schedule", schedule, "constant, constant:<t> or harmonic");
  fixpoint->add_option("--fp-tol", fp_tol, "residual tolerance");
  fixpoint->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
  fixpoint->add_option("--trace", trace, "residual trace CSV path");
  fixpoint->add_flag("--oracle", oracle, "also minimize the squared residual");
  fixpoint->add_option("--seed", seed, "seed");
  fixpoint->add_option("--out,-o", out, "report path");
  fixpoint->add_option("--workers,-j", workers, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*list) {
      if (list_json) {
        std::cout << wconvex::catalog_json(scenario_dir()).dump(2) << "\n";
      } else {
        std::cout << wconvex::catalog_text(scenario_dir());
      }
      return kExitPass;
    }

    if (*run) {
      const std::string path = resolve_config(config);
      const json cfg = wconvex::load_config(path);
      const std::string base = std::filesystem::path(path).parent_path().string();
      wconvex::RunSettings settings{workers};
      const auto suite = wconvex::run_config(cfg, settings, base.empty() ? "." : base);
      if (out.empty() && cfg.contains("output") && cfg["output"].is_string()) out = cfg["output"].get<std::string>();
      return finish(suite, out);
    }

    if (*verify) {
      json s = scenario_shell("verify", wconvex::space_spec_from_arg(space_arg), seed);
      s["tasks"] = json::array({{{"kind", "verify"},
                                 {"property", property},
                                 {"fn", wconvex::function_spec_from_arg(fn_arg)},
                                 {"n", n},
                                 {"seed", seed}}});
      return run_single(s, workers, out);
    }

    if (*project) {
      json s = scenario_shell("project", wconvex::space_spec_from_arg(space_arg), seed);
      s["tasks"] = json::array({{{"kind", "project"},
                                 {"set", wconvex::parse_config_text(set_arg, "--set")},
                                 {"x", wconvex::point_from_arg(x_arg, "--x")},
                                 {"starts", starts},
                                 {"seed", seed}}});
      return run_single(s, workers, out);
    }

    json s = scenario_shell("fixpoint", wconvex::space_spec_from_arg(space_arg), seed);
    json task = {{"kind", "fixpoint"},
                 {"map", wconvex::parse_config_text(map_arg, "--map")},
                 {"x0", wconvex::point_from_arg(x0_arg, "--x0")},
                 {"schedule", schedule},
                 {"fp_tol", fp_tol},
                 {"max_iter", max_iter},
                 {"oracle", oracle},
                 {"seed", seed}};
    if (!trace.empty()) task["trace"] = trace;
    s["tasks"] = json::array({task});
    return run_single(s, workers, out);
  } catch (const wconvex::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
