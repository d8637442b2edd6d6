#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "mcq/simulator.hpp"

namespace mcq::cli {

// Config-file problem with the offending line number; rendered as
// "path:line: message".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, int line, const std::string& message)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)),
        line_(line) {}
  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

using Section = std::map<std::string, std::string>;

// Parsed key=value experiment description plus the raw sections (used by
// `compare` to check that catalog/traffic agree across scheme files).
struct ExperimentFile {
  SchemeConfig config;
  std::string scheme_label;
  std::string path;
  std::map<std::string, Section> raw;
};

ExperimentFile parse_experiment_file(const std::string& path);
ExperimentFile parse_experiment_text(const std::string& text,
                                     const std::string& path);

}  // namespace mcq::cli
