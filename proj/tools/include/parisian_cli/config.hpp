#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "parisian/levy_model.hpp"

namespace parisian::cli {

struct GridSpec {
  double x_min = -2.0;
  double x_max = 10.0;
  std::size_t n_points = 121;
};

struct SimSpec {
  std::size_t paths = 100000;
  std::uint64_t seed = 42;
  std::optional<double> horizon;  // default log(10^4)/q
  std::optional<double> step;     // default 1e-3 when sigma > 0
};

struct RunConfig {
  LevyModel model;
  ControlParams params;
  GridSpec grid;
  SimSpec sim;
};

// Validates every field before returning; throws ConfigError naming the
// offending field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// The fully resolved configuration, defaults included.
nlohmann::json to_json(const RunConfig& config);

}  // namespace parisian::cli
