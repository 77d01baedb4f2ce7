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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopbeam/bcd.hpp"

namespace coopbeam {

enum class SweepKind { kPower, kAntennas, kRfChains };

std::string_view to_string(SweepKind kind);
SweepKind parse_sweep(std::string_view name);

/// Values swept when the config file does not list any.
std::vector<double> default_sweep_values(SweepKind kind);

struct RunConfig {
  ScenarioConfig scenario;
  SweepKind sweep = SweepKind::kPower;
  std::vector<double> sweep_values;
  BcdConfig bcd;
  PowerModel power;
  std::vector<Architecture> archs{Architecture::kFullyDigital, Architecture::kFullyConnected,
                                  Architecture::kFixedSubarray, Architecture::kDynamicSubarray};
  int trials = 200;
  std::uint64_t seed = 1;
  int workers = 1;

  /// Scenario at one sweep point. The RF-chain sweep also sets K = L * N_RF.
  ScenarioConfig scenario_at(double value) const;

  /// Checks every sweep point, throwing ConfigError naming the field.
  void validate() const;
};

/// Parses the JSON config text. Unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace coopbeam
