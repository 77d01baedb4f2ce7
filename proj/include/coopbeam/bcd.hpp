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

#include <string>
#include <string_view>
#include <vector>

#include "coopbeam/digital.hpp"
#include "coopbeam/subarray.hpp"

namespace coopbeam {

enum class Architecture { kFullyDigital, kFullyConnected, kFixedSubarray, kDynamicSubarray };

/// "fd", "fc", "fs", "ds".
std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);

/// Hardware power draw per device, milliwatts.
struct PowerModel {
  double baseband_mw = 200.0;
  double rf_chain_mw = 300.0;
  double phase_shifter_mw = 25.0;
  double switch_mw = 5.0;
};

/// Circuit power of one BS (RF chains, phase shifters, switches).
double circuit_power(Architecture arch, const Scenario& scn, const PowerModel& pm = {});

/// Total network power L (P_max + P_BB + P_HW), milliwatts.
double hardware_power(Architecture arch, const Scenario& scn, const PowerModel& pm = {});

struct BcdConfig {
  int max_outer = 50;
  double rel_tol = 1e-4;
  AnalogSolveOptions analog;
  BisectionOptions bisection;
  int kmeans_iters = 50;
  // Dynamic subarray: regroup from a moving F_fc every outer round instead
  // of grouping once from the converged fully connected design.
  bool regroup_every_iteration = false;
};

struct BcdResult {
  BeamformerState state;
  std::vector<double> trace;  // f_o after each auxiliary refresh; trace[0] is the initial point
  int iterations = 0;         // completed beam-update rounds
  double sum_rate = 0.0;
  AntennaGrouping grouping;   // dynamic subarray only
  int warm_start_iterations = 0;  // dynamic subarray: rounds of the fully connected stage
};

/// Feasible starting point: random unit-modulus analog beams on the
/// architecture's support and matched-filter digital beams that split each
/// BS's budget evenly across its users.
BeamformerState initial_state(Architecture arch, const ChannelSet& channels, const Association& assoc,
                              const Scenario& scn, Rng& rng, const BcdConfig& cfg = {},
                              std::vector<CMat>* analog_fc = nullptr, AntennaGrouping* grouping = nullptr);

/// Positions of conj(vec(F_RF_l)) that a grouping connects, per BS.
std::vector<std::vector<Index>> grouping_supports(const AntennaGrouping& grouping, Index antennas);

/// Block coordinate ascent over (rho, xi, analog, digital). The dynamic
/// subarray runs the fully connected design first, groups its antennas, and
/// iterates on the masked support; trace and iterations cover that last part.
BcdResult bcd_solve(Architecture arch, const ChannelSet& channels, const Association& assoc, const Scenario& scn,
                    Rng& rng, const BcdConfig& cfg = {});

/// First trace index whose relative change from its predecessor is below tol,
/// or trace.size() - 1 when none is.
int iterations_to_plateau(const std::vector<double>& trace, double tol);

}  // namespace coopbeam
