#include "mcq/cli/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "mcq/errors.hpp"

namespace mcq::cli {

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"catalog", {"M", "file_time_s"}},
    {"traffic", {"users", "per_user_rate", "zipf_alpha"}},
    {"cache", {"capacity"}},
    {"channel", {"kind", "r", "snr", "bandwidth_hz", "fixed_rate", "file_bits"}},
    {"scheme", {"name", "coding_search"}},
    {"run", {"horizon_events", "warmup_frac", "seed", "replications", "metric"}},
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

struct RawFile {
  std::map<std::string, Section> sections;
  std::map<std::string, std::map<std::string, int>> lines;
};

RawFile read_sections(const std::string& text, const std::string& path) {
  RawFile raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(path, lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!kKnownKeys.count(section))
        throw ConfigError(path, lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path, lineno, "expected key=value");
    if (section.empty())
      throw ConfigError(path, lineno, "key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!kKnownKeys.at(section).count(key))
      throw ConfigError(path, lineno,
                        "unknown key '" + key + "' in [" + section + "]");
    if (raw.sections[section].count(key))
      throw ConfigError(path, lineno, "duplicate key '" + key + "'");
    if (value.empty())
      throw ConfigError(path, lineno, "empty value for '" + key + "'");
    raw.sections[section][key] = value;
    raw.lines[section][key] = lineno;
  }
  return raw;
}

class Reader {
 public:
  Reader(const RawFile& raw, std::string path)
      : raw_(raw), path_(std::move(path)) {}

  bool has(const std::string& section, const std::string& key) const {
    auto it = raw_.sections.find(section);
    return it != raw_.sections.end() && it->second.count(key);
  }

  std::string require(const std::string& section, const std::string& key) const {
    if (!has(section, key))
      throw ConfigError(path_, 0,
                        "missing required key '" + key + "' in [" + section +
                            "] (required for this scheme)");
    return raw_.sections.at(section).at(key);
  }

  int line(const std::string& section, const std::string& key) const {
    return raw_.lines.at(section).at(key);
  }

  double number(const std::string& section, const std::string& key) const {
    const std::string v = require(section, key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(path_, line(section, key),
                        "cannot parse number '" + v + "' for '" + key + "'");
    }
  }

  double number_or(const std::string& section, const std::string& key,
                   double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
  }

  long long integer(const std::string& section, const std::string& key) const {
    const double x = number(section, key);
    if (x != std::llround(x))
      throw ConfigError(path_, line(section, key),
                        "'" + key + "' must be an integer");
    return std::llround(x);
  }

  long long integer_or(const std::string& section, const std::string& key,
                       long long fallback) const {
    return has(section, key) ? integer(section, key) : fallback;
  }

  const std::string& path() const { return path_; }

 private:
  const RawFile& raw_;
  std::string path_;
};

SchemeId scheme_from_label(const std::string& label, bool& fading_alias) {
  fading_alias = false;
  if (label == "FIFO") return SchemeId::Fifo;
  if (label == "MULTICAST") return SchemeId::Multicast;
  if (label == "LRU-M") return SchemeId::LruM;
  if (label == "PCS-M") return SchemeId::PcsM;
  if (label == "MPCS-M") return SchemeId::MpcsM;
  if (label == "CDLS") return SchemeId::Cdls;
  if (label == "CDLS-M") return SchemeId::CdlsM;
  if (label == "UPO-M") return SchemeId::UpoM;
  if (label == "LRU-CM") return SchemeId::LruCm;
  if (label == "FADING-RETX") {
    fading_alias = true;
    return SchemeId::Multicast;
  }
  throw std::invalid_argument("unknown scheme '" + label + "'");
}

}  // namespace

ExperimentFile parse_experiment_text(const std::string& text,
                                     const std::string& path) {
  const RawFile raw = read_sections(text, path);
  const Reader r(raw, path);
  ExperimentFile out;
  out.path = path;
  out.raw = raw.sections;

  SchemeConfig& cfg = out.config;
  cfg.file_count = static_cast<int>(r.integer("catalog", "M"));
  cfg.file_time_s = r.number("catalog", "file_time_s");
  cfg.user_count = static_cast<int>(r.integer("traffic", "users"));
  cfg.per_user_rate = r.number("traffic", "per_user_rate");
  cfg.zipf_alpha = r.number("traffic", "zipf_alpha");

  out.scheme_label = r.require("scheme", "name");
  bool fading_alias = false;
  try {
    cfg.scheme = scheme_from_label(out.scheme_label, fading_alias);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, r.line("scheme", "name"), e.what());
  }
  if (r.has("scheme", "coding_search")) {
    const std::string v = out.raw.at("scheme").at("coding_search");
    if (v != "pairwise")
      throw ConfigError(path, r.line("scheme", "coding_search"),
                        "only coding_search=pairwise is supported");
  }

  const bool needs_cache = scheme_uses_lru(cfg.scheme) ||
                           scheme_uses_partition(cfg.scheme);
  if (needs_cache)
    cfg.cache_capacity = static_cast<int>(r.integer("cache", "capacity"));
  else
    cfg.cache_capacity = static_cast<int>(r.integer_or("cache", "capacity", 0));

  if (r.has("channel", "kind")) {
    const std::string kind = out.raw.at("channel").at("kind");
    if (kind == "error-free")
      cfg.channel.kind = ChannelKind::ErrorFree;
    else if (kind == "worst-rate")
      cfg.channel.kind = ChannelKind::WorstRate;
    else if (kind == "retransmit" || kind == "retransmit-fixed-rate")
      cfg.channel.kind = ChannelKind::RetransmitFixedRate;
    else
      throw ConfigError(path, r.line("channel", "kind"),
                        "unknown channel kind '" + kind + "'");
  }
  cfg.channel.success_prob = r.number_or("channel", "r", 0.0);
  cfg.channel.snr = r.number_or("channel", "snr", 10.0);
  cfg.channel.bandwidth_hz = r.number_or("channel", "bandwidth_hz", 1e7);
  cfg.channel.file_bits = r.number_or("channel", "file_bits", 0.0);
  cfg.channel.fixed_rate = r.number_or("channel", "fixed_rate", 0.0);
  if (fading_alias && cfg.channel.kind != ChannelKind::RetransmitFixedRate)
    throw ConfigError(path, 0,
                      "scheme FADING-RETX needs [channel] kind=retransmit");

  cfg.horizon_events =
      static_cast<std::uint64_t>(r.integer("run", "horizon_events"));
  cfg.warmup_fraction = r.number_or("run", "warmup_frac", 0.2);
  cfg.seed = static_cast<std::uint64_t>(r.integer_or("run", "seed", 1));
  cfg.replications = static_cast<int>(r.integer_or("run", "replications", 1));
  if (r.has("run", "metric")) {
    const std::string m = out.raw.at("run").at("metric");
    if (m == "queuing-delay")
      cfg.metric = Metric::QueuingDelay;
    else if (m == "sojourn")
      cfg.metric = Metric::Sojourn;
    else
      throw ConfigError(path, r.line("run", "metric"),
                        "metric must be queuing-delay or sojourn");
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path, 0, e.what());
  }
  return out;
}

ExperimentFile parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_text(buffer.str(), path);
}

}  // namespace mcq::cli
