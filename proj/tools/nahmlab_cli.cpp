#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "nahmlab/acceptance.hpp"
#include "nahmlab/nahm.hpp"
#include "nahmlab/scenario.hpp"

// Exit codes: 0 success, 1 assertion failure, 2 parse/usage error,
// 3 numeric blow-up.

int main(int argc, char** argv) {
  CLI::App app{"nahmlab: Nahm flows, regularized pairings and implosion strata"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", filter;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int grid_nodes = 0;
  double t_max = 0;

  auto* run = app.add_subcommand("run", "execute a JSON scenario file");
  run->add_option("scenario", scenario_path, "scenario JSON path")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--grid-nodes", grid_nodes, "override grid resolution");
  run->add_option("--tmax", t_max, "override half-line truncation");

  auto* acc = app.add_subcommand("acceptance", "run the acceptance suite");
  acc->add_option("--filter", filter, "only criteria whose name contains this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      nahmlab::RunOptions opts;
      if (seed_set) opts.seed = seed;
      if (grid_nodes > 0) opts.grid_nodes = grid_nodes;
      if (t_max > 0) opts.t_max = t_max;
      nahmlab::Report rep = nahmlab::run_scenario(scenario_path, out_dir, opts);
      for (const auto& a : rep.assertions)
        std::printf("[%s] %s: %s\n", a.passed ? "PASS" : "FAIL", a.name.c_str(),
                    a.detail.c_str());
      std::printf("report: %s/%s_report.json\n", out_dir.c_str(),
                  rep.scenario.name.c_str());
      return rep.passed() ? 0 : 1;
    }
    auto results = nahmlab::run_acceptance(filter);
    if (results.empty()) {
      std::fprintf(stderr, "no acceptance criterion matches filter '%s'\n",
                   filter.c_str());
      return 2;
    }
    return nahmlab::report_acceptance(results) ? 0 : 1;
  } catch (const nahmlab::ScenarioParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nahmlab::BlowUpError& e) {
    std::fprintf(stderr, "numeric blow-up: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
