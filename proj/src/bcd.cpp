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

#include "coopbeam/bcd.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace coopbeam {

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kFullyDigital: return "fd";
    case Architecture::kFullyConnected: return "fc";
    case Architecture::kFixedSubarray: return "fs";
    case Architecture::kDynamicSubarray: return "ds";
  }
  return "?";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "fd") return Architecture::kFullyDigital;
  if (name == "fc") return Architecture::kFullyConnected;
  if (name == "fs") return Architecture::kFixedSubarray;
  if (name == "ds") return Architecture::kDynamicSubarray;
  throw ConfigError("arch: unknown architecture '" + std::string(name) + "'");
}

double circuit_power(Architecture arch, const Scenario& scn, const PowerModel& pm) {
  const auto nt = static_cast<double>(scn.antennas);
  const auto nrf = static_cast<double>(scn.rf_chains);
  switch (arch) {
    case Architecture::kFullyDigital: return nt * pm.rf_chain_mw;
    case Architecture::kFullyConnected: return nrf * pm.rf_chain_mw + nt * nrf * pm.phase_shifter_mw;
    case Architecture::kFixedSubarray: return nrf * pm.rf_chain_mw + nt * pm.phase_shifter_mw;
    case Architecture::kDynamicSubarray:
      return nrf * pm.rf_chain_mw + nt * pm.phase_shifter_mw + nt * pm.switch_mw;
  }
  return 0.0;
}

double hardware_power(Architecture arch, const Scenario& scn, const PowerModel& pm) {
  return static_cast<double>(scn.bs_count) * (scn.p_max_mw + pm.baseband_mw + circuit_power(arch, scn, pm));
}

namespace {

CMat random_phases(Index rows, Index cols, Rng& rng) {
  CMat F(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) F(r, c) = std::polar(1.0, rng.uniform(-kPi, kPi));
  return F;
}

void matched_filter_digital(BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                            const Scenario& scn) {
  for (Index l = 0; l < channels.bs_count(); ++l) {
    const auto& users = assoc.served[l];
    state.digital[l].setZero();
    if (users.empty()) continue;
    const double share = scn.p_max_mw / static_cast<double>(users.size());
    for (Index k : users) {
      const CVec f = state.analog[l].adjoint() * channels.h(l, k);
      const double p = (state.analog[l] * f).squaredNorm();
      if (p > 0.0) state.digital[l].col(k) = std::sqrt(share / p) * f;
    }
  }
}

}  // namespace

BeamformerState initial_state(Architecture arch, const ChannelSet& channels, const Association& assoc,
                              const Scenario& scn, Rng& rng, const BcdConfig& cfg, std::vector<CMat>* analog_fc,
                              AntennaGrouping* grouping) {
  const Index bs = channels.bs_count();
  const Index nt = channels.antennas();
  const Index nrf = arch == Architecture::kFullyDigital ? nt : scn.rf_chains;
  BeamformerState state = BeamformerState::zeros(bs, channels.user_count(), nt, nrf);

  switch (arch) {
    case Architecture::kFullyDigital:
      for (auto& F : state.analog) F = CMat::Identity(nt, nt);
      break;
    case Architecture::kFullyConnected:
      for (auto& F : state.analog) F = random_phases(nt, nrf, rng);
      break;
    case Architecture::kFixedSubarray: {
      const Eigen::MatrixXi mask = FixedSubarrayLayout(nt, nrf).mask();
      for (auto& F : state.analog) F = random_phases(nt, nrf, rng).cwiseProduct(mask.cast<Complex>());
      break;
    }
    case Architecture::kDynamicSubarray: {
      std::vector<CMat> fc;
      for (Index l = 0; l < bs; ++l) fc.push_back(random_phases(nt, nrf, rng));
      AntennaGrouping g = kmeans_antenna_grouping(fc, nrf, cfg.kmeans_iters, rng);
      state.analog = apply_grouping(fc, g);
      if (analog_fc != nullptr) *analog_fc = std::move(fc);
      if (grouping != nullptr) *grouping = std::move(g);
      break;
    }
  }
  matched_filter_digital(state, channels, assoc, scn);
  return state;
}

namespace {

using Proposal = std::optional<std::vector<CMat>>;

// Shared outer loop. `propose` returns candidate analog beams for the
// current state, or nothing when the architecture has no analog block;
// `accepted` runs when a candidate is kept.
template <class Propose, class Accepted>
void run_outer(BcdResult& out, const ChannelSet& channels, const Association& assoc, const Scenario& scn,
               const BcdConfig& cfg, Propose&& propose, Accepted&& accepted) {
  BeamformerState& s = out.state;
  for (;;) {
    s.rho = update_rho(s, channels, assoc, scn);
    s.xi = update_xi(s, channels, assoc, scn);
    const double fo = fp_objective(s, channels, assoc, scn);
    out.trace.push_back(fo);

    // All-zero xi makes every beam update return zero beams.
    if (s.xi.cwiseAbs().maxCoeff() == 0.0) break;
    if (out.trace.size() > 1) {
      const double prev = out.trace[out.trace.size() - 2];
      if (std::abs(fo - prev) <= cfg.rel_tol * std::abs(prev)) break;
    }
    if (out.iterations >= cfg.max_outer) break;

    // The analog subproblem ignores the power budget, so an analog step
    // followed by the digital rescaling can lose ground. Keep the pair only
    // if it improves f_o at the current auxiliaries; otherwise fall back to
    // a digital step alone. Bisection tolerance can cost a hair of f_o at a
    // converged point, so that step is guarded too.
    bool moved = false;
    if (Proposal analog = propose(s)) {
      BeamformerState candidate = s;
      candidate.analog = std::move(*analog);
      solve_digital(candidate, channels, assoc, scn, cfg.bisection);
      if (fp_objective(candidate, channels, assoc, scn) >= fo) {
        s = std::move(candidate);
        moved = true;
        accepted();
      }
    }
    if (!moved) {
      BeamformerState next = s;
      solve_digital(next, channels, assoc, scn, cfg.bisection);
      if (fp_objective(next, channels, assoc, scn) >= fo) s = std::move(next);
    }
    ++out.iterations;
  }
  out.sum_rate = weighted_sum_rate(s, channels, assoc, scn);
}

}  // namespace

std::vector<std::vector<Index>> grouping_supports(const AntennaGrouping& grouping, Index antennas) {
  std::vector<std::vector<Index>> out;
  for (const auto& groups : grouping.sets) {
    std::vector<Index> support;
    for (std::size_t q = 0; q < groups.size(); ++q)
      for (Index i : groups[q]) support.push_back(static_cast<Index>(q) * antennas + i);
    std::sort(support.begin(), support.end());
    out.push_back(std::move(support));
  }
  return out;
}

BcdResult bcd_solve(Architecture arch, const ChannelSet& channels, const Association& assoc, const Scenario& scn,
                    Rng& rng, const BcdConfig& cfg) {
  if (!assoc.is_valid(scn.rf_chains)) throw PreconditionError("bcd_solve: infeasible association");
  if (arch == Architecture::kFixedSubarray && scn.antennas % scn.rf_chains != 0)
    throw ConfigError("N_T: must be divisible by N_RF for the fixed subarray");

  BcdResult out;
  const auto nothing = [] {};
  switch (arch) {
    case Architecture::kFullyDigital:
      out.state = initial_state(arch, channels, assoc, scn, rng, cfg);
      run_outer(
          out, channels, assoc, scn, cfg, [](const BeamformerState&) -> Proposal { return std::nullopt; }, nothing);
      return out;
    case Architecture::kFullyConnected:
      out.state = initial_state(arch, channels, assoc, scn, rng, cfg);
      run_outer(
          out, channels, assoc, scn, cfg,
          [&](const BeamformerState& s) -> Proposal { return solve_analog_fc(s, channels, assoc, scn, cfg.analog).analog; },
          nothing);
      return out;
    case Architecture::kFixedSubarray:
      out.state = initial_state(arch, channels, assoc, scn, rng, cfg);
      run_outer(
          out, channels, assoc, scn, cfg,
          [&](const BeamformerState& s) -> Proposal { return solve_analog_fs(s, channels, assoc, scn, cfg.analog).analog; },
          nothing);
      return out;
    case Architecture::kDynamicSubarray:
      break;
  }

  // Dynamic subarray in two steps: the fully connected design supplies
  // F_fc, k-means groups its rows, and the masked problem is iterated on
  // that support. The trace covers the second step only.
  BcdResult fc = bcd_solve(Architecture::kFullyConnected, channels, assoc, scn, rng, cfg);
  std::vector<CMat> analog_fc = fc.state.analog;
  out.warm_start_iterations = fc.iterations;
  out.grouping = kmeans_antenna_grouping(analog_fc, scn.rf_chains, cfg.kmeans_iters, rng);
  out.state = std::move(fc.state);
  out.state.analog = apply_grouping(analog_fc, out.grouping);
  solve_digital(out.state, channels, assoc, scn, cfg.bisection);

  // With regrouping on, each round also moves F_fc one RCG solve, regroups
  // it, and refines the masked phases; the grouping is kept with the beams.
  AntennaGrouping proposed;
  run_outer(
      out, channels, assoc, scn, cfg,
      [&](const BeamformerState& s) -> Proposal {
        proposed = out.grouping;
        BeamformerState start = s;
        if (cfg.regroup_every_iteration) {
          DynamicSubarraySolution ds =
              solve_analog_ds(s, channels, assoc, scn, analog_fc, rng, cfg.kmeans_iters, cfg.analog);
          analog_fc = std::move(ds.analog_fc);
          proposed = std::move(ds.grouping);
          start.analog = std::move(ds.analog);
        }
        return solve_masked_analog(start, channels, assoc, scn, grouping_supports(proposed, scn.antennas), cfg.analog)
            .analog;
      },
      [&] { out.grouping = proposed; });
  return out;
}

int iterations_to_plateau(const std::vector<double>& trace, double tol) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double prev = trace[i - 1];
    if (std::abs(trace[i] - prev) < tol * std::abs(prev)) return static_cast<int>(i);
  }
  return trace.empty() ? 0 : static_cast<int>(trace.size()) - 1;
}

}  // namespace coopbeam
