#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcq::cli {

// number formatting used by every CSV writer (deterministic output)
std::string fmt(double value);

struct SimulateOptions {
  std::string config_path;
  std::string out_path;          // empty = stdout
  std::int64_t seed = -1;        // -1 = keep config value
  int replications = -1;         // -1 = keep config value
  std::int64_t max_events = -1;  // cap horizon, for quick desk runs
  int threads = 0;               // 0 = resolve from MCQ_THREADS / cores
};

struct AnalyzeOptions {
  std::string config_path;
  std::string out_path;
  std::string bracket_mode = "eq5";  // eq5 | eq6
};

struct SweepOptions {
  std::string config_path;
  std::string out_path;
  std::string axis;
  std::vector<double> values;
  std::int64_t max_events = -1;
  int threads = 0;
};

struct CompareOptions {
  std::string config_dir;
  std::string out_path;
  std::string axis;
  std::vector<double> values;
  std::int64_t max_events = -1;
  int threads = 0;
};

int cmd_simulate(const SimulateOptions& options);
int cmd_analyze(const AnalyzeOptions& options);
int cmd_sweep(const SweepOptions& options);
int cmd_compare(const CompareOptions& options);

// MCQ_THREADS caps parallelism; defaults to the available cores.
int resolve_threads(int requested);

}  // namespace mcq::cli
