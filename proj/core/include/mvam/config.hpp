#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mvam/dynamics.hpp"
#include "mvam/energetics.hpp"
#include "mvam/morphology.hpp"
#include "mvam/search.hpp"

namespace mvam {

struct SimulationConfig {
  ControllerGains gains;
  std::optional<double> t_end;  // defaults to one gait period
  bool feedforward = true;
  double divergence_bound = 0.5;
  std::size_t sample = 0;  // design-space sample to simulate
};

// Everything a run needs, resolved from a JSON document.
struct RunConfig {
  DesignSpaceSpec space;
  EvaluationSettings evaluation;
  GAConfig ga;
  SimulationConfig simulation;
};

// Parses a config document. A run manifest is accepted too: its
// "resolved_config" member is used. Errors are ConfigError with the source
// name and either the line/column or the offending field path.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON for a resolved config; parse_config(to_json(c)) == c.
std::string to_json(const RunConfig& config, int indent = 2);

}  // namespace mvam
