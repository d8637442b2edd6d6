#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcq/cli/commands.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const auto comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mcq - queueing simulator and analytical solver for cache-aided "
      "multicast downlinks"};
  app.set_version_flag("--version", "mcq 0.1.0");
  app.require_subcommand(1);

  mcq::cli::SimulateOptions sim;
  std::string sim_values;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a scheme config and write per-replication CSV");
  simulate->add_option("config", sim.config_path, "experiment .ini file")
      ->required();
  simulate->add_option("--out", sim.out_path, "output CSV path (default stdout)");
  simulate->add_option("--seed", sim.seed, "override [run] seed");
  simulate->add_option("--reps", sim.replications, "override replications");
  simulate->add_option("--max-events", sim.max_events,
                       "cap the horizon (quick desk runs)");
  simulate->add_option("--threads", sim.threads, "worker threads");

  mcq::cli::AnalyzeOptions ana;
  auto* analyze = app.add_subcommand(
      "analyze", "Closed-form / fixed-point delay estimates as CSV");
  analyze->add_option("config", ana.config_path, "experiment .ini file")
      ->required();
  analyze->add_option("--out", ana.out_path, "output CSV path");
  analyze
      ->add_option("--bracket-mode", ana.bracket_mode,
                   "fixed-point bracket: eq5 (full PK, default) or eq6")
      ->check(CLI::IsMember({"eq5", "eq6"}));

  mcq::cli::SweepOptions swp;
  std::string sweep_values;
  auto* sweep = app.add_subcommand(
      "sweep", "Sweep one parameter of a config, one CSV row per value");
  sweep->add_option("config", swp.config_path, "experiment .ini file")
      ->required();
  sweep->add_option("--axis", swp.axis,
                    "user_count | per_user_rate | C | alpha | snr")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated axis values")
      ->required();
  sweep->add_option("--out", swp.out_path, "output CSV path");
  sweep->add_option("--max-events", swp.max_events, "cap the horizon");
  sweep->add_option("--threads", swp.threads, "worker threads");

  mcq::cli::CompareOptions cmp;
  std::string compare_values;
  auto* compare = app.add_subcommand(
      "compare",
      "Sweep every scheme config in a directory over a shared axis");
  compare->add_option("config_dir", cmp.config_dir, "directory of .ini files")
      ->required();
  compare->add_option("--axis", cmp.axis,
                      "user_count | per_user_rate | C | alpha | snr")
      ->required();
  compare->add_option("--values", compare_values, "comma-separated axis values")
      ->required();
  compare->add_option("--out", cmp.out_path, "output CSV path");
  compare->add_option("--max-events", cmp.max_events, "cap the horizon");
  compare->add_option("--threads", cmp.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  try {
    if (*simulate) return mcq::cli::cmd_simulate(sim);
    if (*analyze) return mcq::cli::cmd_analyze(ana);
    if (*sweep) {
      swp.values = parse_values(sweep_values);
      return mcq::cli::cmd_sweep(swp);
    }
    if (*compare) {
      cmp.values = parse_values(compare_values);
      return mcq::cli::cmd_compare(cmp);
    }
  } catch (const std::exception& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
