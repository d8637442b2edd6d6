#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mcq/cli/commands.hpp"
#include "mcq/cli/experiment.hpp"

using namespace mcq;
using namespace mcq::cli;

namespace {

const std::string kGoodConfig = R"(# multicast example
[catalog]
M = 20
file_time_s = 1.0

[traffic]
users = 4
per_user_rate = 0.2
zipf_alpha = 1.0

[scheme]
name = MULTICAST

[run]
horizon_events = 2000
seed = 9
)";

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string out_file =
      (std::filesystem::temp_directory_path() / "mcq_cli_out.txt").string();
  const std::string cmd =
      std::string(MCQ_CLI_PATH) + " " + args + " >" + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  return WEXITSTATUS(status);
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("experiment parsing fills config and defaults") {
  const auto exp = parse_experiment_text(kGoodConfig, "mem.ini");
  CHECK(exp.config.file_count == 20);
  CHECK(exp.config.user_count == 4);
  CHECK(exp.config.per_user_rate == doctest::Approx(0.2));
  CHECK(exp.config.scheme == SchemeId::Multicast);
  CHECK(exp.config.warmup_fraction == doctest::Approx(0.2));  // default
  CHECK(exp.config.replications == 1);
  CHECK(exp.config.metric == Metric::QueuingDelay);
  CHECK(exp.scheme_label == "MULTICAST");
}

TEST_CASE("experiment parsing rejects unknown keys with the line number") {
  const std::string bad = kGoodConfig + "\n[cache]\nflavor = mint\n";
  try {
    parse_experiment_text(bad, "mem.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 19);
    CHECK(std::string(e.what()).find("flavor") != std::string::npos);
  }
}

TEST_CASE("experiment parsing: missing scheme, bad numbers, duplicates") {
  CHECK_THROWS_AS(parse_experiment_text("[catalog]\nM = 2\n", "m.ini"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_text("[catalog]\nM = two\n", "m.ini"), ConfigError);
  CHECK_THROWS_AS(
      parse_experiment_text("[catalog]\nM = 2\nM = 3\n", "m.ini"),
      ConfigError);
  CHECK_THROWS_AS(parse_experiment_text("M = 2\n", "m.ini"), ConfigError);
}

TEST_CASE("FADING-RETX alias requires a retransmission channel") {
  std::string cfg = kGoodConfig;
  cfg.replace(cfg.find("MULTICAST"), 9, "FADING-RETX");
  CHECK_THROWS_AS(parse_experiment_text(cfg, "m.ini"), ConfigError);
  cfg += "\n[channel]\nkind = retransmit\nr = 0.9\n";
  const auto exp = parse_experiment_text(cfg, "m.ini");
  CHECK(exp.config.scheme == SchemeId::Multicast);
  CHECK(exp.config.channel.kind == ChannelKind::RetransmitFixedRate);
  CHECK(exp.scheme_label == "FADING-RETX");
}

TEST_CASE("cli: version and help exit zero") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("simulate") == 2);  // missing config argument
}

TEST_CASE("cli simulate: reps rows plus aggregate, deterministic bytes") {
  const std::string cfg = write_temp("mcq_good.ini", kGoodConfig);
  const std::string out1 =
      (std::filesystem::temp_directory_path() / "mcq_out1.csv").string();
  const std::string out2 =
      (std::filesystem::temp_directory_path() / "mcq_out2.csv").string();
  CHECK(run_cli("simulate " + cfg + " --reps 5 --out " + out1) == 0);
  CHECK(run_cli("simulate " + cfg + " --reps 5 --out " + out2) == 0);

  std::ifstream a(out1), b(out2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(count_lines(sa.str()) == 7);  // header + 5 reps + aggregate
  CHECK(sa.str().find("aggregate") != std::string::npos);
}

TEST_CASE("cli simulate: malformed config exits 2 with a line number") {
  const std::string cfg =
      write_temp("mcq_bad.ini", "[catalog]\nM = 2\nfile_time_s = nope\n");
  std::string output;
  CHECK(run_cli("simulate " + cfg, &output) == 2);
  CHECK(output.find(":3:") != std::string::npos);
}

TEST_CASE("cli simulate: unwritable output is a runtime error (exit 3)") {
  const std::string cfg = write_temp("mcq_good.ini", kGoodConfig);
  CHECK(run_cli("simulate " + cfg + " --out /nonexistent-dir/x.csv") == 3);
}

TEST_CASE("cli analyze: multicast columns and simulation-only error") {
  const std::string cfg = write_temp("mcq_good.ini", kGoodConfig);
  std::string output;
  CHECK(run_cli("analyze " + cfg, &output) == 0);
  CHECK(output.find("d_fixed_point") != std::string::npos);
  CHECK(count_lines(output) == 21);  // header + one row per file

  std::string cdls = kGoodConfig;
  cdls.replace(cdls.find("MULTICAST"), 9, "CDLS");
  cdls += "\n[cache]\ncapacity = 5\n";
  const std::string cdls_path = write_temp("mcq_cdls.ini", cdls);
  CHECK(run_cli("analyze " + cdls_path, &output) == 2);
  CHECK(output.find("simulation-only") != std::string::npos);
}

TEST_CASE("cli analyze: unstable fifo emits the sentinel") {
  std::string fifo = kGoodConfig;
  fifo.replace(fifo.find("MULTICAST"), 9, "FIFO");
  fifo.replace(fifo.find("per_user_rate = 0.2"), 19, "per_user_rate = 0.5");
  const std::string path = write_temp("mcq_fifo.ini", fifo);
  std::string output;
  CHECK(run_cli("analyze " + path, &output) == 0);  // rho = 2
  CHECK(output.find("unstable") != std::string::npos);
}

TEST_CASE("cli sweep: one row per value") {
  const std::string cfg = write_temp("mcq_good.ini", kGoodConfig);
  std::string output;
  CHECK(run_cli("sweep " + cfg + " --axis user_count --values 2,4 --max-events 500",
                &output) == 0);
  CHECK(count_lines(output) == 3);
  CHECK(run_cli("sweep " + cfg + " --axis bogus --values 1", &output) == 2);
}

TEST_CASE("MCQ_THREADS caps the worker count") {
  setenv("MCQ_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  unsetenv("MCQ_THREADS");
  CHECK(resolve_threads(0) >= 1);
  CHECK(resolve_threads(5) == 5);
}

TEST_CASE("cli compare: a single scheme is degenerate but valid") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "mcq_cmp_single";
  fs::create_directories(dir);
  std::ofstream(dir / "only.ini") << kGoodConfig;
  std::string output;
  CHECK(run_cli("compare " + dir.string() +
                    " --axis per_user_rate --values 0.1 --max-events 500",
                &output) == 0);
  CHECK(count_lines(output) == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli compare: shared sections enforced") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "mcq_cmp";
  fs::create_directories(dir);
  std::ofstream(dir / "a.ini") << kGoodConfig;
  std::string fifo = kGoodConfig;
  fifo.replace(fifo.find("MULTICAST"), 9, "FIFO");
  std::ofstream(dir / "b.ini") << fifo;

  std::string output;
  CHECK(run_cli("compare " + dir.string() +
                    " --axis per_user_rate --values 0.05,0.1 --max-events 500",
                &output) == 0);
  CHECK(count_lines(output) == 5);  // header + 2 schemes x 2 values

  std::string other = fifo;
  other.replace(other.find("M = 20"), 6, "M = 25");
  std::ofstream(dir / "b.ini") << other;
  CHECK(run_cli("compare " + dir.string() +
                    " --axis per_user_rate --values 0.05 --max-events 500",
                &output) == 2);
  CHECK(output.find("mismatched keys") != std::string::npos);
  CHECK(output.find('M') != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("every shipped recipe parses and runs at desk scale") {
  namespace fs = std::filesystem;
  const fs::path recipes(MCQ_RECIPES_DIR);
  REQUIRE(fs::exists(recipes));
  std::size_t found = 0;
  for (const auto& entry : fs::recursive_directory_iterator(recipes)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".ini")
      continue;
    ++found;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(parse_experiment_file(entry.path().string()));
    std::string output;
    CHECK(run_cli("simulate " + entry.path().string() + " --max-events 2000",
                  &output) == 0);
  }
  CHECK(found >= 8);
}
