// obslab <kind> --config <path> [--out <dir>] [--seed <n>] [--threads <n>] [--check]
//
// Exit status: 0 when every built-in assertion passes, 1 on an assertion or
// numerical failure, 2 on a configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "obslab/runner.hpp"

namespace {

constexpr int kAssertionFailure = 1;
constexpr int kConfigError = 2;

unsigned threads_from_env() {
  if (const char* env = std::getenv("OBSLAB_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed OBSLAB_THREADS='" << env << "'\n";
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observability and control experiments for the Schrödinger equation"};
  app.set_version_flag("--version", std::string(OBSLAB_VERSION));

  std::string kind;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool check_only = false;

  app.add_option("kind", kind, "Experiment kind")
      ->required()
      ->check(CLI::IsMember(obslab::kind_names()));
  app.add_option("--config", config_path, "JSON parameter block")->required();
  app.add_option("--out", out_dir, "Directory for the JSON report and CSV tables");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomised inputs");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_flag("--check", check_only, "Validate the configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  obslab::Json params;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config '" << config_path << "'\n";
      return kConfigError;
    }
    params = obslab::Json::parse(in);
  } catch (const obslab::Json::parse_error& e) {
    std::cerr << "config is not valid JSON: " << e.what() << '\n';
    return kConfigError;
  }

  obslab::ExperimentConfig config;
  config.kind = *obslab::parse_kind(kind);
  config.parameters = params;
  if (seed_opt->count() == 0 && params.is_object() && params.contains("seed") &&
      params["seed"].is_number_unsigned())
    seed = params["seed"].get<std::uint64_t>();
  config.seed = seed;
  if (threads_opt->count() == 0)
    threads = params.is_object() && params.contains("threads") && params["threads"].is_number_unsigned()
                  ? params["threads"].get<unsigned>()
                  : threads_from_env();
  config.threads = threads;

  const auto violations = obslab::validate(config.kind, params);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "config error: " << v << '\n';
    return kConfigError;
  }
  if (check_only) {
    std::cout << "config ok\n";
    return 0;
  }

  obslab::RunReport report;
  try {
    report = obslab::run(config);
  } catch (const obslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kAssertionFailure;
  }

  const std::string text = report.document.dump(2);
  if (out_dir.empty()) {
    std::cout << text << '\n';
  } else {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (kind + ".json")) << text << '\n';
    for (const auto& [name, csv] : report.tables) std::ofstream(fs::path(out_dir) / name) << csv;
    std::cout << kind << ": " << (report.passed ? "passed" : "FAILED") << " (" << out_dir << ")\n";
  }
  for (const auto& [name, ok] : report.document["assertions"].items())
    if (!ok.get<bool>()) std::cerr << "assertion failed: " << name << '\n';
  return report.passed ? 0 : kAssertionFailure;
}
