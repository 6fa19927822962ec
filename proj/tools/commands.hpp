#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace fsgl::cli {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  std::string format = "both";
};

struct CommandResult {
  bool pass = true;
  std::string summary;
  std::string csv;
  nlohmann::json json;
  /// Additional (file name, content) pairs written next to the main outputs.
  std::vector<std::pair<std::string, std::string>> extra_files;
};

/// Reads typed values from a validated configuration mapping.
class Config {
 public:
  explicit Config(YAML::Node node) : node_(std::move(node)) {}
  const YAML::Node& node() const { return node_; }
  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  /// A scalar is read as a one-element list.
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::vector<double>> number_lists(const std::string& key) const;
  Config sub(const std::string& key) const;

 private:
  YAML::Node at(const std::string& key) const;
  YAML::Node node_;
};

using CommandFn = CommandResult (*)(const Config& cfg, const CommonOptions& opts);

struct CommandSpec {
  const char* name;
  const char* description;
  const char* defaults;  // YAML
  CommandFn run;
};

const std::vector<CommandSpec>& commands();

/// Defaults overlaid with the user document; unknown keys raise ConfigError.
YAML::Node merge_config(const YAML::Node& defaults, const YAML::Node& user, const std::string& where = "");

nlohmann::json yaml_to_json(const YAML::Node& node);

}  // namespace fsgl::cli
