#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fitevo/simulate.hpp"

namespace fitevo {

/// A parsed model file. See README "Config schema" for the accepted keys.
struct ModelConfig {
  SimConfig sim;
  /// Number of equispaced points in the analyze report's cdf_samples.
  int cdf_samples = 101;
  /// k_max when the increments came from the counterexample construction.
  int counterexample_k_max = 0;
};

/// Numbers may be given as JSON numbers or as "a/b" / "1e-3" strings.
double parse_number(const nlohmann::json& value, const std::string& where);

FitnessMeasure parse_measure(const nlohmann::json& j);
DiscreteLaw parse_discrete_law(const nlohmann::json& j, const std::string& where);
IncrementLaw parse_increments(const nlohmann::json& j, int* counterexample_k_max = nullptr);

/// All errors surface as ConfigError with the offending key in the message.
ModelConfig parse_config(const nlohmann::json& j);
/// Also reports unreadable files and JSON syntax errors as ConfigError.
ModelConfig load_config(const std::filesystem::path& path);

nlohmann::json measure_to_json(const FitnessMeasure& m);

}  // namespace fitevo
