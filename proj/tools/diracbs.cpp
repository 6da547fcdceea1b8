#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "diracbs/parallel.hpp"
#include "diracbs/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw diracbs::ValidationError("cannot read config '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

/// Loads the config and applies the command-line overrides.
diracbs::RunConfig load(const std::string& command, const std::string& path, const std::string& out,
                        const std::optional<std::uint64_t>& seed) {
  diracbs::Json doc;
  try {
    doc = diracbs::Json::parse(read_file(path));
  } catch (const diracbs::Json::parse_error& e) {
    throw diracbs::ConfigError({{"/", std::string("malformed JSON: ") + e.what()}});
  }
  if (doc.is_object()) {
    if (!doc.contains("command")) doc["command"] = command;
    if (doc["command"] != command)
      throw diracbs::ConfigError({{"/command", "config is for '" + doc["command"].dump() + "', invoked as '" + command + "'"}});
    if (seed) doc["seed"] = *seed;
    if (!out.empty()) doc["output"] = out;
  }
  auto result = diracbs::parse_config(doc);
  if (!result.ok()) throw diracbs::ConfigError(std::move(result.errors));
  return *result.config;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birman-Schwinger spectral toolkit for Dirac-type operators"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  for (const auto& name : diracbs::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out, "report path (overrides config output)");
    sub->add_option("--seed", seed, "random seed (overrides config seed)");
    sub->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    const diracbs::RunConfig cfg = load(command, config_path, out, seed);
    const diracbs::Report report = diracbs::run_command(cfg, diracbs::resolve_threads(threads));
    diracbs::write_report(report, cfg.output);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << command << ": wrote " << cfg.output << " in " << seconds << " s";
    if (report.exit_code == 3) std::cerr << " (inconclusive)";
    std::cerr << "\n";
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return diracbs::exit_code_for(e);
  }
}
