#include "parisian_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "parisian/errors.hpp"

namespace parisian::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown field '" + where + key + "'");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where = "") {
  if (!obj.contains(key)) throw ConfigError("config: missing field '" + where + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError("config: field '" + name + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config: field '" + name + "' must be finite");
  return x;
}

double positive(const json& v, const std::string& name) {
  const double x = number(v, name);
  if (!(x > 0.0)) throw ConfigError("config: field '" + name + "' must be positive");
  return x;
}

std::uint64_t count(const json& v, const std::string& name) {
  if (!v.is_number_unsigned()) {
    throw ConfigError("config: field '" + name + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

LevyModel parse_model(const json& doc) {
  std::vector<JumpComponent> jumps;
  if (doc.contains("jumps")) {
    const json& arr = doc.at("jumps");
    if (!arr.is_array()) throw ConfigError("config: field 'jumps' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "jumps[" + std::to_string(i) + "].";
      const json& j = arr[i];
      if (!j.is_object()) throw ConfigError("config: field 'jumps[" + std::to_string(i) + "]' must be an object");
      reject_unknown(j, {"rate", "alpha"}, where);
      jumps.push_back({positive(require(j, "rate", where), where + "rate"),
                       positive(require(j, "alpha", where), where + "alpha")});
    }
  }
  const double sigma = doc.contains("sigma") ? number(doc.at("sigma"), "sigma") : 0.0;
  if (sigma < 0.0) throw ConfigError("config: field 'sigma' must be >= 0");
  try {
    if (sigma > 0.0) {
      if (doc.contains("c")) throw ConfigError("config: field 'c' applies only when sigma = 0; use 'mu'");
      return LevyModel::with_diffusion(sigma, number(require(doc, "mu"), "mu"), std::move(jumps));
    }
    if (doc.contains("mu")) throw ConfigError("config: field 'mu' applies only when sigma > 0; use 'c'");
    return LevyModel::bounded_variation(positive(require(doc, "c"), "c"), std::move(jumps));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid model: ") + e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown(doc, {"sigma", "mu", "c", "jumps", "q", "p", "K", "grid", "sim"}, "");

  LevyModel model = parse_model(doc);
  ControlParams params{positive(require(doc, "q"), "q"), positive(require(doc, "p"), "p"),
                       positive(require(doc, "K"), "K")};
  try {
    params.validate(model);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: field 'K': ") + e.what());
  }

  GridSpec grid;
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    if (!g.is_object()) throw ConfigError("config: field 'grid' must be an object");
    reject_unknown(g, {"x_min", "x_max", "n_points"}, "grid.");
    if (g.contains("x_min")) grid.x_min = number(g.at("x_min"), "grid.x_min");
    if (g.contains("x_max")) grid.x_max = number(g.at("x_max"), "grid.x_max");
    if (g.contains("n_points")) grid.n_points = count(g.at("n_points"), "grid.n_points");
    if (!(grid.x_min < grid.x_max)) throw ConfigError("config: field 'grid.x_max' must exceed grid.x_min");
    if (grid.n_points < 2) throw ConfigError("config: field 'grid.n_points' must be >= 2");
  }

  SimSpec sim;
  if (doc.contains("sim")) {
    const json& s = doc.at("sim");
    if (!s.is_object()) throw ConfigError("config: field 'sim' must be an object");
    reject_unknown(s, {"paths", "seed", "horizon", "step"}, "sim.");
    if (s.contains("paths")) sim.paths = count(s.at("paths"), "sim.paths");
    if (s.contains("seed")) sim.seed = count(s.at("seed"), "sim.seed");
    if (s.contains("horizon")) sim.horizon = positive(s.at("horizon"), "sim.horizon");
    if (s.contains("step")) sim.step = positive(s.at("step"), "sim.step");
    if (sim.paths == 0) throw ConfigError("config: field 'sim.paths' must be positive");
  }
  return RunConfig{std::move(model), params, grid, sim};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& config) {
  json j;
  const LevyModel& m = config.model;
  if (m.bounded_variation()) {
    j["c"] = m.drift();
  } else {
    j["sigma"] = m.sigma();
    j["mu"] = m.drift();
  }
  j["jumps"] = json::array();
  for (const auto& jc : m.jumps()) j["jumps"].push_back({{"rate", jc.rate}, {"alpha", jc.decay}});
  j["q"] = config.params.q;
  j["p"] = config.params.p;
  j["K"] = config.params.K;
  j["grid"] = {{"x_min", config.grid.x_min},
               {"x_max", config.grid.x_max},
               {"n_points", config.grid.n_points}};
  json sim = {{"paths", config.sim.paths}, {"seed", config.sim.seed}};
  sim["horizon"] = config.sim.horizon ? json(*config.sim.horizon) : json(nullptr);
  sim["step"] = config.sim.step ? json(*config.sim.step) : json(nullptr);
  j["sim"] = sim;
  return j;
}

}  // namespace parisian::cli
