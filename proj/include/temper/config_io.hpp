#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "temper/experiments.hpp"

namespace temper {

/// Malformed or unparseable experiment configuration. The message carries a
/// field path or parse position.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a declarative experiment description. Unknown keys are hard errors.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Loads and parses a JSON config file.
ExperimentConfig load_config(const std::string& path);

/// Canonical echo of a config with every default expanded; parsing the echo
/// reproduces the config exactly.
nlohmann::json echo_config(const ExperimentConfig& cfg);

std::string metric_name(Metric m);

}  // namespace temper
