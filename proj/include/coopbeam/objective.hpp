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

#include <vector>

#include "coopbeam/association.hpp"
#include "coopbeam/channel.hpp"
#include "coopbeam/types.hpp"

namespace coopbeam {

/// Hybrid beamformer plus the auxiliary variables of the FP reformulation.
struct BeamformerState {
  std::vector<CMat> analog;   // per BS: N_T x N_RF
  std::vector<CMat> digital;  // per BS: N_RF x K, column k is f_BB(l, k)
  RVec rho;                   // per user, >= 0
  CVec xi;                    // per user
  RVec beta;                  // per BS, >= 0

  Index bs_count() const { return static_cast<Index>(analog.size()); }
  Index user_count() const { return rho.size(); }

  static BeamformerState zeros(Index bs, Index users, Index antennas, Index rf_chains);
};

/// K x K matrix with entry (k, j) = h(l, k)^H F_RF(l) f_BB(l, j).
CMat received_amplitudes(const BeamformerState& state, const ChannelSet& channels, Index l);

/// Per-user quantities shared by the rate and FP evaluations.
struct LinkTerms {
  CVec desired;        // sum_l alpha(l,k) h^H F f(l,k)
  RVec interference;   // sum_{j != k} |sum_l alpha(l,j) h(l,k)^H F f(l,j)|^2
  RVec received;       // sum_l sum_j alpha(l,j) |h(l,k)^H F f(l,j)|^2
};

LinkTerms link_terms(const BeamformerState& state, const ChannelSet& channels, const Association& assoc);

double sinr(Index k, const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
            const Scenario& scn);

double weighted_sum_rate(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                         const Scenario& scn);

/// FP surrogate f_o in bits. The noise term enters with the received power
/// inside the |xi|^2 penalty, which is the grouping whose xi-stationary point
/// is update_xi. Everything except log2(1 + rho) is divided by ln 2: with
/// that scaling rho = SINR followed by update_xi is the exact joint maximizer
/// over (rho, xi), so the auxiliary refresh never lowers f_o.
double fp_objective(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                    const Scenario& scn);

RVec update_rho(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                const Scenario& scn);

CVec update_xi(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
               const Scenario& scn);

/// The beam-dependent part of f_o (f_o minus the terms constant in the beams).
double beam_surrogate(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                      const Scenario& scn);

/// sum_k alpha(l,k) ||F_RF(l) f_BB(l,k)||^2.
double transmit_power(const BeamformerState& state, const Association& assoc, Index l);

}  // namespace coopbeam
