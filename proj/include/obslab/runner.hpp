#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obslab/serialization.hpp"

namespace obslab {

enum class ExperimentKind { Geometry, Decompose, ObsSweep, Hum, Counterexample, GramOracle };

std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string kind_name(ExperimentKind kind);
std::vector<std::string> kind_names();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ObsSweep;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Every violation of the parameter block for `kind`; empty iff `run` would
/// accept it. Keys "seed" and "threads" are reserved and always allowed.
std::vector<std::string> validate(ExperimentKind kind, const Json& parameters);

struct RunReport {
  Json document;  ///< tool, version, kind, seed, config, results, assertions, passed, timing
  std::map<std::string, std::string> tables;  ///< file name -> CSV text
  bool passed = false;

  /// The document without the timing field, for determinism checks.
  Json payload() const;
};

/// Throws ConfigError naming the first offending field when validation fails.
RunReport run(const ExperimentConfig& config);

}  // namespace obslab
