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

#include <utility>
#include <vector>

#include "coopbeam/rng.hpp"
#include "coopbeam/types.hpp"

namespace coopbeam {

/// Inputs for building a Scenario. Powers are given in dBm.
struct ScenarioConfig {
  Index bs_count = 3;
  Index user_count = 9;
  Index antennas = 48;
  Index rf_chains = 3;
  double p_max_dbm = 20.0;
  double noise_dbm = -20.0;
  Index rays = 10;
  std::vector<double> weights;  // empty means all ones
  double area_side_m = 500.0;
  double d_over_lambda = 0.5;
  double min_distance_m = 10.0;
};

/// System constants plus deployment geometry. Powers in linear milliwatts.
struct Scenario {
  Index bs_count = 0;
  Index user_count = 0;
  Index antennas = 0;
  Index rf_chains = 0;
  double p_max_mw = 0.0;
  RVec noise_mw;
  RVec weights;
  Index rays = 1;
  double d_over_lambda = 0.5;
  double area_side_m = 0.0;
  std::vector<Eigen::Vector2d> bs_positions;
  std::vector<Eigen::Vector2d> user_positions;

  /// Throws ConfigError naming the first violated field.
  void validate() const;

  double distance(Index l, Index k) const { return (bs_positions[l] - user_positions[k]).norm(); }
};

/// The L x K channel vectors. Column k of `per_bs[l]` is h_{l,k}.
struct ChannelSet {
  std::vector<CMat> per_bs;

  Index bs_count() const { return static_cast<Index>(per_bs.size()); }
  Index user_count() const { return per_bs.empty() ? 0 : per_bs.front().cols(); }
  Index antennas() const { return per_bs.empty() ? 0 : per_bs.front().rows(); }

  auto h(Index l, Index k) const { return per_bs[l].col(k); }

  static ChannelSet zeros(Index bs, Index users, Index antennas);
};

struct PathlossModel {
  double kappa_a = 32.0;
  double kappa_b = 2.0;
  double shadow_variance_db2 = 8.7;
};

/// Unit-norm ULA steering vector.
CVec array_response(double theta, Index antennas, double d_over_lambda);

/// Pathloss in dB with an explicit shadowing term.
double pathloss_db(double distance_m, double shadowing_db, const PathlossModel& model = {});

/// Pathloss in dB with shadowing drawn from N(0, shadow_variance_db2).
double pathloss_db(double distance_m, Rng& rng, const PathlossModel& model = {});

/// sqrt(N_T / N_r) * sum_n gain_n * a(angle_n).
CVec multipath_channel(const CVec& gains, const RVec& angles, Index antennas, double d_over_lambda);

/// Multipath channel with random angles and CN(0, 10^(-pathloss/10)) gains.
CVec random_multipath_channel(Index antennas, Index rays, double d_over_lambda, double pathloss, Rng& rng);

/// Channel between BS l and user k of `scn`; pathloss drawn per link.
CVec generate_channel(const Scenario& scn, Index l, Index k, Rng& rng, const PathlossModel& model = {});

Scenario make_scenario(const ScenarioConfig& cfg);

/// Places BSs on a grid and users uniformly, then draws every channel.
std::pair<Scenario, ChannelSet> generate_scenario(const ScenarioConfig& cfg, Rng& rng,
                                                  const PathlossModel& model = {});

}  // namespace coopbeam
