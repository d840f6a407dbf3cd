#pragma once

#include <cstdint>
#include <string>

#include "eec/collab.hpp"
#include "eec/coverage.hpp"
#include "eec/model_params.hpp"
#include "eec/montecarlo.hpp"

namespace eec {

/// Fully resolved run configuration: a preset plus JSON overrides.
struct ScenarioConfig {
  std::string preset = "table1";
  RadioParams radio;
  DeploymentParams deploy;
  TaskParams task;
  ReliabilityParams reliability;
  MecParams mec;
  SimConfig sim;
  QuadratureConfig quadrature;
  int n_max = 50;           // largest segment count searched for the optimum
  double alpha_step = 0.1;  // bias grid step
  SojournConvention sojourn = SojournConvention::HoldingTime;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// The named preset with every other field at its default.
ScenarioConfig scenario_from_preset(const std::string& name);

/// Parses a JSON document of the form
///   {"preset": "table1", "radio": {...}, "deploy": {...}, "task": {...},
///    "reliability": {...}, "mec": {...}, "sim": {...}, "analysis": {...}}
/// where each section's keys are the field names of the matching struct.
/// Unknown keys, wrong types and invalid values all raise ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);

ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical JSON of the resolved configuration (sorted keys). The thread
/// count is left out because it never changes results.
std::string scenario_to_json(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of scenario_to_json, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace eec
