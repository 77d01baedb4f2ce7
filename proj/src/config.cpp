// Copyright 2026 The coopbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coopbeam/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace coopbeam {

using nlohmann::json;

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPower: return "power";
    case SweepKind::kAntennas: return "antennas";
    case SweepKind::kRfChains: return "rfchains";
  }
  return "?";
}

SweepKind parse_sweep(std::string_view name) {
  if (name == "power") return SweepKind::kPower;
  if (name == "antennas") return SweepKind::kAntennas;
  if (name == "rfchains") return SweepKind::kRfChains;
  throw ConfigError("sweep.name: unknown sweep '" + std::string(name) + "'");
}

std::vector<double> default_sweep_values(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPower: return {0, 5, 10, 15, 20, 25, 30};
    case SweepKind::kAntennas: return {24, 48, 72, 96, 120};
    case SweepKind::kRfChains: return {1, 2, 3, 4, 6, 8};
  }
  return {};
}

namespace {

Index as_count(double v, const char* field) {
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(std::string(field) + ": must be a positive integer");
  return static_cast<Index>(v);
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!known.contains(key)) throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown key");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + key + ": wrong type");
  }
}

}  // namespace

ScenarioConfig RunConfig::scenario_at(double value) const {
  ScenarioConfig s = scenario;
  switch (sweep) {
    case SweepKind::kPower:
      s.p_max_dbm = value;
      break;
    case SweepKind::kAntennas:
      s.antennas = as_count(value, "sweep.values");
      break;
    case SweepKind::kRfChains:
      s.rf_chains = as_count(value, "sweep.values");
      s.user_count = s.bs_count * s.rf_chains;
      if (!s.weights.empty()) s.weights.assign(static_cast<std::size_t>(s.user_count), 1.0);
      break;
  }
  return s;
}

void RunConfig::validate() const {
  if (trials < 1) throw ConfigError("trials: must be positive");
  if (workers < 1) throw ConfigError("workers: must be positive");
  if (archs.empty()) throw ConfigError("arch: at least one architecture required");
  if (sweep_values.empty()) throw ConfigError("sweep.values: must not be empty");
  bcd.analog.rcg.validate();
  if (bcd.kmeans_iters < 1) throw ConfigError("kmeans.max_iters: must be positive");
  if (power.baseband_mw < 0 || power.rf_chain_mw < 0 || power.phase_shifter_mw < 0 || power.switch_mw < 0)
    throw ConfigError("power: must be nonnegative");
  for (double v : sweep_values) {
    const Scenario scn = make_scenario(scenario_at(v));
    for (Architecture a : archs)
      if (a == Architecture::kFixedSubarray && scn.antennas % scn.rf_chains != 0)
        throw ConfigError("N_T: must be divisible by N_RF for the fixed subarray");
  }
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  reject_unknown(j, {"L", "K", "N_T", "N_RF", "P_max_dbm", "noise_dbm", "N_r", "weights", "area_side_m", "sweep",
                     "rcg", "kmeans"},
                 "");
  RunConfig cfg;
  auto& s = cfg.scenario;
  read(j, "L", s.bs_count, "");
  read(j, "K", s.user_count, "");
  read(j, "N_T", s.antennas, "");
  read(j, "N_RF", s.rf_chains, "");
  read(j, "P_max_dbm", s.p_max_dbm, "");
  read(j, "noise_dbm", s.noise_dbm, "");
  read(j, "N_r", s.rays, "");
  read(j, "weights", s.weights, "");
  read(j, "area_side_m", s.area_side_m, "");

  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    reject_unknown(sw, {"name", "values"}, "sweep");
    std::string name = "power";
    read(sw, "name", name, "sweep.");
    cfg.sweep = parse_sweep(name);
    read(sw, "values", cfg.sweep_values, "sweep.");
  }
  if (cfg.sweep_values.empty()) cfg.sweep_values = default_sweep_values(cfg.sweep);

  if (j.contains("rcg")) {
    const json& r = j["rcg"];
    reject_unknown(r, {"max_iters", "grad_tol", "initial_step", "contraction", "armijo_c", "max_backtracks"}, "rcg");
    auto& rc = cfg.bcd.analog.rcg;
    read(r, "max_iters", rc.max_iters, "rcg.");
    read(r, "grad_tol", rc.grad_tol, "rcg.");
    read(r, "initial_step", rc.initial_step, "rcg.");
    read(r, "contraction", rc.contraction, "rcg.");
    read(r, "armijo_c", rc.armijo_c, "rcg.");
    read(r, "max_backtracks", rc.max_backtracks, "rcg.");
  }
  if (j.contains("kmeans")) {
    const json& k = j["kmeans"];
    reject_unknown(k, {"max_iters", "regroup_every_iteration"}, "kmeans");
    read(k, "max_iters", cfg.bcd.kmeans_iters, "kmeans.");
    read(k, "regroup_every_iteration", cfg.bcd.regroup_every_iteration, "kmeans.");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace coopbeam
