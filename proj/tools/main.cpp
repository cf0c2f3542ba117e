#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigsim/fuzzy.hpp"
#include "sigsim/harness.hpp"
#include "sigsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace sigsim;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("SIGSIM_OUT_DIR")) return env;
  return "out";
}

void print_table(const std::vector<RunReport>& reports) {
  long long fixed_delay = 0;
  for (const auto& r : reports)
    if (r.controller == "fixed") fixed_delay = r.total_delay;
  std::printf("%-10s %16s %8s %12s %12s %9s\n", "controller", "total_delay(vs)", "max_sqs",
              "improve(%)", "candidates", "wall(s)");
  for (const auto& r : reports) {
    std::printf("%-10s %16lld %8d %12.2f %12lld %9.2f\n", r.controller.c_str(), r.total_delay,
                r.max_sqs, improvement_pct(r.total_delay, fixed_delay), r.candidates_evaluated,
                r.wall_seconds);
  }
}

int run_command(const std::string& scenario_path, const std::string& controller,
                const std::string& rulebase_path, std::uint64_t seed, const fs::path& out_dir,
                int segment_len) {
  const Scenario scenario = load_scenario(scenario_path);
  IntersectionConfig cfg;

  RuleBase rules;
  const bool wants_fuzzy =
      controller == "all" || controller == "fuzzy" || controller == "fuzzyreal";
  if (wants_fuzzy) {
    if (rulebase_path.empty()) {
      std::fprintf(stderr,
                   "error: --rulebase is required for controller '%s' "
                   "(generate one with: sigsim build-rulebase)\n",
                   controller.c_str());
      return 2;
    }
    rules = RuleBase::load_csv(rulebase_path);
    if (!rules.complete()) {
      std::fprintf(stderr, "error: %s holds %d rules; a complete base has %d\n",
                   rulebase_path.c_str(), rules.size(), kNumRules);
      return 2;
    }
  }

  RunOptions opt;
  opt.seed = seed;
  opt.segment_len_periods = segment_len;

  std::vector<RunReport> reports;
  if (controller == "all") {
    reports = run_all(cfg, scenario, rules, opt);
  } else {
    const auto kind = controller_from_name(controller);
    if (!kind) {
      std::fprintf(stderr, "error: unknown controller '%s'\n", controller.c_str());
      return 2;
    }
    std::fprintf(stderr, "running %s over %s (%d periods)\n", controller.c_str(),
                 scenario.name.c_str(), scenario.num_periods());
    reports.push_back(run_controller(cfg, scenario, *kind, wants_fuzzy ? &rules : nullptr, opt));
  }

  export_reports(reports, out_dir);
  print_table(reports);
  std::fprintf(stderr, "reports written to %s\n", out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-approach signalized intersection simulator and signal-timing benchmark"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string controller = "all";
  std::string rulebase_path;
  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir().string();
  int segment_len = 4;

  auto* run = app.add_subcommand("run", "Run one controller (or all) over a scenario");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--controller", controller,
                  "fixed|pretimed|segmental|fuzzy|realtime|fuzzyreal|all");
  run->add_option("--rulebase", rulebase_path, "Rule-base CSV (fuzzy and fuzzyreal)");
  run->add_option("--seed", seed, "Override the scenario's master seed");
  run->add_option("--out", out_dir, "Output directory (default $SIGSIM_OUT_DIR or ./out)");
  run->add_option("--segment-len", segment_len, "Segment length in periods (segmental)");

  auto* compare = app.add_subcommand("compare", "Run all six controllers and print the table");
  compare->add_option("--scenario", scenario_path, "Scenario file")->required();
  compare->add_option("--rulebase", rulebase_path, "Rule-base CSV")->required();
  compare->add_option("--seed", seed, "Override the scenario's master seed");
  compare->add_option("--out", out_dir, "Output directory (default $SIGSIM_OUT_DIR or ./out)");
  compare->add_option("--segment-len", segment_len, "Segment length in periods (segmental)");

  int reps = 100;
  std::uint64_t build_seed = 1;
  std::string rulebase_out = "rulebase.csv";
  int threads = 1;
  auto* build = app.add_subcommand("build-rulebase",
                                   "Derive the 625-entry rule base by exhaustive search");
  build->add_option("--reps", reps, "Search repetitions per state (default 100)");
  build->add_option("--seed", build_seed, "Base seed for the builder");
  build->add_option("--out", rulebase_out, "Output CSV path");
  build->add_option("--threads", threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(scenario_path, controller, rulebase_path, seed, out_dir, segment_len);
    }
    if (compare->parsed()) {
      return run_command(scenario_path, "all", rulebase_path, seed, out_dir, segment_len);
    }
    if (build->parsed()) {
      IntersectionConfig cfg;
      std::vector<RuleBuildStats> stats;
      auto progress = [](int done, int total) {
        if (done % 25 == 0 || done == total)
          std::fprintf(stderr, "rulebase: %d/%d states\n", done, total);
      };
      const RuleBase rb = build_rulebase(cfg, reps, build_seed, threads, &stats, progress);
      rb.save_csv(rulebase_out);

      double worst_share = 1.0;
      int worst_state = 0;
      double mean_share = 0.0;
      for (std::size_t i = 0; i < stats.size(); ++i) {
        mean_share += stats[i].within_2s_of_mode;
        if (stats[i].within_2s_of_mode < worst_share) {
          worst_share = stats[i].within_2s_of_mode;
          worst_state = static_cast<int>(i);
        }
      }
      mean_share /= static_cast<double>(stats.size());
      std::printf("rulebase: %d states x %d reps, seed %llu -> %s\n", kNumRules, reps,
                  static_cast<unsigned long long>(build_seed), rulebase_out.c_str());
      std::printf("spread: mean %.1f%% of reps within 2 s of the modal green; worst state "
                  "#%d at %.1f%%\n",
                  100.0 * mean_share, worst_state, 100.0 * worst_share);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
