#include "mcq/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "mcq/analysis.hpp"
#include "mcq/cli/experiment.hpp"
#include "mcq/errors.hpp"
#include "mcq/simulator.hpp"

namespace mcq::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_out(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << content;
}

std::string channel_label(const ChannelModel& channel) {
  switch (channel.kind) {
    case ChannelKind::ErrorFree: return "error-free";
    case ChannelKind::WorstRate: return "worst-rate";
    case ChannelKind::RetransmitFixedRate: return "retransmit";
  }
  return "?";
}

void apply_overrides(SchemeConfig& cfg, std::int64_t seed, int reps,
                     std::int64_t max_events) {
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (reps > 0) cfg.replications = reps;
  if (max_events > 0)
    cfg.horizon_events = std::min<std::uint64_t>(
        cfg.horizon_events, static_cast<std::uint64_t>(max_events));
}

void simulate_row(std::ostringstream& csv, const ExperimentFile& exp,
                  const std::string& rep, const DelayStats& s) {
  const SchemeConfig& c = exp.config;
  csv << exp.scheme_label << ',' << c.user_count << ',' << fmt(c.per_user_rate)
      << ',' << fmt(c.zipf_alpha) << ',' << c.file_count << ','
      << c.cache_capacity << ',' << channel_label(c.channel) << ','
      << (c.metric == Metric::Sojourn ? "sojourn" : "queuing-delay") << ','
      << rep << ',' << fmt(s.mean_delay_s) << ',' << fmt(s.ci95_half_width)
      << ',' << fmt(s.mean_sojourn_s) << ',' << s.type1 << ',' << s.type2
      << ',' << s.hits << ',' << s.max_queue_entries << ','
      << (s.unstable ? 1 : 0) << '\n';
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const unsupported_configuration_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MCQ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int cmd_simulate(const SimulateOptions& options) {
  return run_guarded([&] {
    ExperimentFile exp = parse_experiment_file(options.config_path);
    apply_overrides(exp.config, options.seed, options.replications,
                    options.max_events);
    exp.config.validate();

    const auto reps =
        run_replications(exp.config, resolve_threads(options.threads));
    const DelayStats total = aggregate(reps);

    std::ostringstream csv;
    csv << "scheme,users,per_user_rate,zipf_alpha,M,C,channel,metric,rep,"
           "mean_delay_s,ci95_s,mean_sojourn_s,type1_count,type2_count,hits,"
           "max_queue_len,unstable_flag\n";
    for (std::size_t i = 0; i < reps.size(); ++i)
      simulate_row(csv, exp, std::to_string(i), reps[i]);
    simulate_row(csv, exp, "aggregate", total);
    write_out(options.out_path, csv.str());
    return kExitOk;
  });
}

int cmd_analyze(const AnalyzeOptions& options) {
  return run_guarded([&] {
    const ExperimentFile exp = parse_experiment_file(options.config_path);
    const SchemeConfig& cfg = exp.config;
    BracketMode mode;
    if (options.bracket_mode == "eq5")
      mode = BracketMode::PkFull;
    else if (options.bracket_mode == "eq6")
      mode = BracketMode::UtilizationOnly;
    else
      throw std::invalid_argument("--bracket-mode must be eq5 or eq6");

    const Catalog catalog = cfg.catalog();
    const RateMatrix rates = cfg.rate_matrix();

    std::ostringstream csv;
    csv << "scheme,bracket_mode,user,file,d_fixed_point,rho,residual,"
           "type1_delay_s,mixture_delay_s\n";

    auto solution_rows = [&](const FixedPointSolution& sol,
                             const std::vector<double>& file_rates,
                             const std::string& user) {
      for (std::size_t i = 0; i < file_rates.size(); ++i) {
        if (file_rates[i] <= 0) continue;
        const double mix = per_file_mean_delay(
            file_rates[i], sol.effective_rates[i], sol.delay);
        csv << exp.scheme_label << ',' << options.bracket_mode << ',' << user
            << ',' << (i + 1) << ',' << fmt(sol.delay) << ','
            << fmt(sol.utilization) << ',' << fmt(sol.residual) << ','
            << fmt(sol.delay) << ',' << fmt(mix) << '\n';
      }
    };

    const bool fading =
        cfg.channel.kind == ChannelKind::RetransmitFixedRate &&
        cfg.scheme == SchemeId::Multicast;
    switch (cfg.scheme) {
      case SchemeId::Fifo: {
        const auto d = fifo_mean_delay(rates, catalog);
        const double total = rates.total_rate();
        double es = 0;
        for (int i = 0; i < rates.file_count; ++i)
          es += total > 0 ? rates.file_rate(i) / total * catalog.file_times[i]
                          : 0.0;
        csv << exp.scheme_label << ',' << options.bracket_mode << ",all,all,";
        if (d)
          csv << fmt(*d) << ',' << fmt(total * es) << ",0," << fmt(*d) << ','
              << fmt(*d) << '\n';
        else
          csv << "unstable,unstable,unstable,unstable,unstable\n";
        break;
      }
      case SchemeId::Multicast: {
        if (cfg.channel.kind == ChannelKind::WorstRate)
          throw std::invalid_argument(
              "analyze: the worst-rate channel is a simulation-only model");
        const auto file_rates = rates.file_rates();
        const FixedPointSolution sol =
            fading ? fading_fixed_point(
                         rates,
                         std::vector<double>(
                             cfg.user_count,
                             cfg.channel.resolve_success_prob(cfg.file_time_s)),
                         catalog, mode)
                   : multicast_fixed_point(file_rates, catalog, mode);
        solution_rows(sol, file_rates, "all");
        break;
      }
      case SchemeId::LruM: {
        if (cfg.channel.kind != ChannelKind::ErrorFree)
          throw std::invalid_argument(
              "analyze: LRU-M analytics assume an error-free channel");
        const auto miss_rates = lru_miss_rates(rates, cfg.cache_capacity);
        const FixedPointSolution sol =
            lru_fed_fixed_point(rates, cfg.cache_capacity, catalog, mode);
        solution_rows(sol, miss_rates, "all");
        break;
      }
      case SchemeId::PcsM: {
        const auto sols =
            coded_per_user_fixed_point(rates, cfg.cache_capacity, catalog);
        for (int j = 0; j < cfg.user_count; ++j)
          solution_rows(sols[j], rates.user_file_rates(j),
                        std::to_string(j + 1));
        break;
      }
      default:
        throw std::invalid_argument(
            std::string("analyze: '") + exp.scheme_label +
            "' is a simulation-only scheme");
    }
    write_out(options.out_path, csv.str());
    return kExitOk;
  });
}

namespace {

std::string sweep_csv(const ExperimentFile& exp, const std::string& axis,
                      const std::vector<SweepPoint>& points) {
  std::ostringstream csv;
  csv << "scheme,axis,axis_value,mean_delay_s,ci95_s,mean_sojourn_s,"
         "unstable_flag\n";
  for (const auto& p : points)
    csv << exp.scheme_label << ',' << axis << ',' << fmt(p.value) << ','
        << fmt(p.stats.mean_delay_s) << ',' << fmt(p.stats.ci95_half_width)
        << ',' << fmt(p.stats.mean_sojourn_s) << ','
        << (p.stats.unstable ? 1 : 0) << '\n';
  return csv.str();
}

}  // namespace

int cmd_sweep(const SweepOptions& options) {
  return run_guarded([&] {
    ExperimentFile exp = parse_experiment_file(options.config_path);
    apply_overrides(exp.config, -1, -1, options.max_events);
    if (options.values.empty())
      throw std::invalid_argument("sweep: --values must not be empty");
    const SweepAxis axis = sweep_axis_from_string(options.axis);
    const auto points = sweep(exp.config, axis, options.values,
                              resolve_threads(options.threads));
    write_out(options.out_path, sweep_csv(exp, options.axis, points));
    return kExitOk;
  });
}

int cmd_compare(const CompareOptions& options) {
  return run_guarded([&] {
    namespace fs = std::filesystem;
    if (options.values.empty())
      throw std::invalid_argument("compare: --values must not be empty");
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(options.config_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".ini")
        paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.size() < 1)
      throw std::invalid_argument("compare: no .ini configs in " +
                                  options.config_dir);

    std::vector<ExperimentFile> exps;
    for (const auto& p : paths) exps.push_back(parse_experiment_file(p));

    // shared sections must agree
    for (const char* section : {"catalog", "traffic"}) {
      const Section& base = exps.front().raw[section];
      for (std::size_t k = 1; k < exps.size(); ++k) {
        const Section& other = exps[k].raw[section];
        std::vector<std::string> bad;
        for (const auto& [key, value] : base) {
          auto it = other.find(key);
          if (it == other.end() || it->second != value) bad.push_back(key);
        }
        for (const auto& [key, value] : other)
          if (!base.count(key)) bad.push_back(key);
        if (!bad.empty()) {
          std::sort(bad.begin(), bad.end());
          bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
          std::string msg = "compare: [" + std::string(section) +
                            "] differs between " + exps.front().path + " and " +
                            exps[k].path + "; mismatched keys:";
          for (const auto& k2 : bad) msg += " " + k2;
          throw std::invalid_argument(msg);
        }
      }
    }

    const SweepAxis axis = sweep_axis_from_string(options.axis);
    const int threads = resolve_threads(options.threads);
    std::ostringstream csv;
    csv << "scheme,axis_value,mean_sojourn_s,ci95_s,unstable_flag\n";
    for (auto& exp : exps) {
      apply_overrides(exp.config, -1, -1, options.max_events);
      const auto points = sweep(exp.config, axis, options.values, threads);
      for (const auto& p : points)
        csv << exp.scheme_label << ',' << fmt(p.value) << ','
            << fmt(p.stats.mean_sojourn_s) << ','
            << fmt(p.stats.ci95_half_width) << ','
            << (p.stats.unstable ? 1 : 0) << '\n';
    }
    write_out(options.out_path, csv.str());
    return kExitOk;
  });
}

}  // namespace mcq::cli
