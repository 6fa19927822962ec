#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "fsgl/error.hpp"
#include "fsgl/report.hpp"
#include "fsgl/serialize.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

YAML::Node load_user_config(const std::string& path) {
  if (path.empty()) return YAML::Node();
  std::ifstream in(path);
  if (!in) throw fsgl::ConfigError("cannot read configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return YAML::Load(ss.str());
  } catch (const YAML::Exception& e) {
    throw fsgl::ConfigError("configuration file '" + path + "': " + e.what());
  }
}

std::filesystem::path output_dir(const fsgl::cli::CommonOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv("FSGL_OUT_DIR"); env && *env) return env;
  return ".";
}

int run(const fsgl::cli::CommandSpec& spec, const fsgl::cli::CommonOptions& opts) {
  using namespace fsgl::cli;
  fsgl::cli::CommandResult result;
  nlohmann::json parameters;
  try {
    if (opts.format != "csv" && opts.format != "json" && opts.format != "both")
      throw fsgl::ConfigError("--format must be csv, json or both");
    const YAML::Node merged = merge_config(YAML::Load(spec.defaults), load_user_config(opts.config_path));
    parameters = yaml_to_json(merged);
    result = spec.run(Config(merged), opts);
  } catch (const fsgl::Error& e) {
    std::cerr << spec.name << ": error: " << e.what() << "\n";
    return kExitInput;
  } catch (const YAML::Exception& e) {
    std::cerr << spec.name << ": configuration error: " << e.what() << "\n";
    return kExitInput;
  }

  const auto dir = output_dir(opts);
  result.json["command"] = spec.name;
  result.json["parameters"] = parameters;
  if (opts.seed) result.json["seed_override"] = *opts.seed;
  result.json["pass"] = result.pass;
  result.json["summary"] = result.summary;
  try {
    if (opts.format != "json") fsgl::write_file_atomic(dir / (std::string(spec.name) + ".csv"), result.csv);
    if (opts.format != "csv")
      fsgl::write_file_atomic(dir / (std::string(spec.name) + ".json"), result.json.dump(2) + "\n");
    for (const auto& [name, content] : result.extra_files) fsgl::write_file_atomic(dir / name, content);
  } catch (const std::exception& e) {
    std::cerr << spec.name << ": cannot write outputs: " << e.what() << "\n";
    return kExitInput;
  }
  std::cout << result.summary << "\n";
  return result.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Sobolev and Grand Lebesgue experiments"};
  app.require_subcommand(1);
  fsgl::cli::CommonOptions opts;
  std::uint64_t seed = 0;
  int workers = 0;
  const fsgl::cli::CommandSpec* chosen = nullptr;
  bool show_defaults = false;

  for (const auto& spec : fsgl::cli::commands()) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--config", opts.config_path, "YAML configuration overriding the defaults");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", opts.out_dir, "output directory (default: $FSGL_OUT_DIR or .)");
    sub->add_option("--format", opts.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_flag("--print-defaults", show_defaults, "print the default configuration and exit");
    sub->callback([&chosen, &spec] { chosen = &spec; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (!chosen) return kExitInput;
  if (show_defaults) {
    std::cout << chosen->defaults;
    return kExitPass;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--workers")) opts.workers = workers;
  }
  return run(*chosen, opts);
}
