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

#include "coopbeam/channel.hpp"

#include <cmath>
#include <string>

namespace coopbeam {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field + ": " + why);
}

}  // namespace

void Scenario::validate() const {
  require(bs_count >= 1, "L", "must be at least 1");
  require(user_count >= 1, "K", "must be at least 1");
  require(antennas >= 1, "N_T", "must be at least 1");
  require(rf_chains >= 1, "N_RF", "must be at least 1");
  require(rf_chains <= antennas, "N_RF", "cannot exceed N_T");
  require(user_count <= bs_count * rf_chains, "K", "exceeds L*N_RF");
  require(antennas % rf_chains == 0, "N_T", "must be divisible by N_RF");
  require(p_max_mw > 0.0 && std::isfinite(p_max_mw), "P_max", "must be positive");
  require(rays >= 1, "N_r", "must be at least 1");
  require(noise_mw.size() == user_count, "noise", "needs one entry per user");
  require((noise_mw.array() > 0.0).all(), "noise", "must be positive");
  require(weights.size() == user_count, "weights", "needs one entry per user");
  require((weights.array() > 0.0).all(), "weights", "must be positive");
  require(d_over_lambda > 0.0, "d_over_lambda", "must be positive");
  if (!bs_positions.empty() || !user_positions.empty()) {
    require(static_cast<Index>(bs_positions.size()) == bs_count, "bs_positions", "needs L entries");
    require(static_cast<Index>(user_positions.size()) == user_count, "user_positions", "needs K entries");
  }
}

ChannelSet ChannelSet::zeros(Index bs, Index users, Index antennas) {
  ChannelSet out;
  out.per_bs.assign(static_cast<std::size_t>(bs), CMat::Zero(antennas, users));
  return out;
}

CVec array_response(double theta, Index antennas, double d_over_lambda) {
  CVec a(antennas);
  const double phase_step = 2.0 * kPi * d_over_lambda * std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
  for (Index n = 0; n < antennas; ++n) a(n) = scale * std::polar(1.0, phase_step * static_cast<double>(n));
  return a;
}

double pathloss_db(double distance_m, double shadowing_db, const PathlossModel& model) {
  if (!(distance_m > 0.0)) throw DomainError("pathloss_db: distance must be positive");
  return model.kappa_a + 10.0 * model.kappa_b * std::log10(distance_m) + shadowing_db;
}

double pathloss_db(double distance_m, Rng& rng, const PathlossModel& model) {
  if (!(distance_m > 0.0)) throw DomainError("pathloss_db: distance must be positive");
  return pathloss_db(distance_m, rng.normal(0.0, std::sqrt(model.shadow_variance_db2)), model);
}

CVec multipath_channel(const CVec& gains, const RVec& angles, Index antennas, double d_over_lambda) {
  if (gains.size() != angles.size() || gains.size() == 0)
    throw ShapeError("multipath_channel: gains and angles must be equal, nonzero length");
  CVec h = CVec::Zero(antennas);
  for (Index n = 0; n < gains.size(); ++n) h += gains(n) * array_response(angles(n), antennas, d_over_lambda);
  return std::sqrt(static_cast<double>(antennas) / static_cast<double>(gains.size())) * h;
}

CVec random_multipath_channel(Index antennas, Index rays, double d_over_lambda, double pathloss, Rng& rng) {
  const double variance = std::pow(10.0, -0.1 * pathloss);
  RVec angles(rays);
  CVec gains(rays);
  for (Index n = 0; n < rays; ++n) {
    angles(n) = rng.uniform(-kPi / 2.0, kPi / 2.0);
    gains(n) = rng.complex_normal(variance);
  }
  return multipath_channel(gains, angles, antennas, d_over_lambda);
}

CVec generate_channel(const Scenario& scn, Index l, Index k, Rng& rng, const PathlossModel& model) {
  if (l < 0 || l >= scn.bs_count || k < 0 || k >= scn.user_count)
    throw PreconditionError("generate_channel: index out of range");
  const double kappa = pathloss_db(scn.distance(l, k), rng, model);
  return random_multipath_channel(scn.antennas, scn.rays, scn.d_over_lambda, kappa, rng);
}

Scenario make_scenario(const ScenarioConfig& cfg) {
  Scenario scn;
  scn.bs_count = cfg.bs_count;
  scn.user_count = cfg.user_count;
  scn.antennas = cfg.antennas;
  scn.rf_chains = cfg.rf_chains;
  scn.p_max_mw = dbm_to_mw(cfg.p_max_dbm);
  scn.rays = cfg.rays;
  scn.d_over_lambda = cfg.d_over_lambda;
  scn.area_side_m = cfg.area_side_m;
  const Index k = std::max<Index>(cfg.user_count, 0);
  scn.noise_mw = RVec::Constant(k, dbm_to_mw(cfg.noise_dbm));
  if (cfg.weights.empty()) {
    scn.weights = RVec::Ones(k);
  } else {
    scn.weights = Eigen::Map<const RVec>(cfg.weights.data(), static_cast<Index>(cfg.weights.size()));
  }
  scn.validate();
  if (!(cfg.area_side_m > 0.0)) throw ConfigError("area_side_m: must be positive");
  if (cfg.min_distance_m < 0.0) throw ConfigError("min_distance_m: must be nonnegative");
  return scn;
}

std::pair<Scenario, ChannelSet> generate_scenario(const ScenarioConfig& cfg, Rng& rng, const PathlossModel& model) {
  Scenario scn = make_scenario(cfg);

  const Index cols = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(scn.bs_count))));
  const Index rows = (scn.bs_count + cols - 1) / cols;
  const double cell_w = scn.area_side_m / static_cast<double>(cols);
  const double cell_h = scn.area_side_m / static_cast<double>(rows);
  for (Index l = 0; l < scn.bs_count; ++l) {
    scn.bs_positions.emplace_back((static_cast<double>(l % cols) + 0.5) * cell_w,
                                  (static_cast<double>(l / cols) + 0.5) * cell_h);
  }

  constexpr int kMaxPlacementAttempts = 10000;
  for (Index k = 0; k < scn.user_count; ++k) {
    Eigen::Vector2d p;
    int attempts = 0;
    for (;;) {
      p = {rng.uniform(0.0, scn.area_side_m), rng.uniform(0.0, scn.area_side_m)};
      double closest = std::numeric_limits<double>::infinity();
      for (const auto& b : scn.bs_positions) closest = std::min(closest, (b - p).norm());
      if (closest >= cfg.min_distance_m) break;
      if (++attempts >= kMaxPlacementAttempts) throw ConfigError("min_distance_m: cannot place users");
    }
    scn.user_positions.push_back(p);
  }

  ChannelSet channels = ChannelSet::zeros(scn.bs_count, scn.user_count, scn.antennas);
  for (Index l = 0; l < scn.bs_count; ++l)
    for (Index k = 0; k < scn.user_count; ++k) channels.per_bs[l].col(k) = generate_channel(scn, l, k, rng, model);
  return {std::move(scn), std::move(channels)};
}

}  // namespace coopbeam
