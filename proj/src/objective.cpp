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

#include "coopbeam/objective.hpp"

#include <cmath>
#include <numbers>

namespace coopbeam {

BeamformerState BeamformerState::zeros(Index bs, Index users, Index antennas, Index rf_chains) {
  BeamformerState s;
  s.analog.assign(static_cast<std::size_t>(bs), CMat::Zero(antennas, rf_chains));
  s.digital.assign(static_cast<std::size_t>(bs), CMat::Zero(rf_chains, users));
  s.rho = RVec::Zero(users);
  s.xi = CVec::Zero(users);
  s.beta = RVec::Zero(bs);
  return s;
}

CMat received_amplitudes(const BeamformerState& state, const ChannelSet& channels, Index l) {
  return channels.per_bs[l].adjoint() * (state.analog[l] * state.digital[l]);
}

LinkTerms link_terms(const BeamformerState& state, const ChannelSet& channels, const Association& assoc) {
  const Index users = channels.user_count();
  CMat coherent = CMat::Zero(users, users);  // (k, j): sum_l alpha(l,j) h(l,k)^H F f(l,j)
  RVec received = RVec::Zero(users);
  for (Index l = 0; l < channels.bs_count(); ++l) {
    const CMat y = received_amplitudes(state, channels, l);
    for (Index j = 0; j < users; ++j) {
      if (!assoc.serves(l, j)) continue;
      coherent.col(j) += y.col(j);
      received += y.col(j).cwiseAbs2();
    }
  }
  LinkTerms t;
  t.desired = coherent.diagonal();
  t.interference = coherent.cwiseAbs2().rowwise().sum() - t.desired.cwiseAbs2();
  t.interference = t.interference.cwiseMax(0.0);
  t.received = received;
  return t;
}

namespace {

double sinr_from(const LinkTerms& t, const Scenario& scn, Index k) {
  return std::norm(t.desired(k)) / (t.interference(k) + scn.noise_mw(k));
}

}  // namespace

double sinr(Index k, const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
            const Scenario& scn) {
  return sinr_from(link_terms(state, channels, assoc), scn, k);
}

double weighted_sum_rate(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                         const Scenario& scn) {
  const LinkTerms t = link_terms(state, channels, assoc);
  double rate = 0.0;
  for (Index k = 0; k < scn.user_count; ++k) rate += scn.weights(k) * std::log2(1.0 + sinr_from(t, scn, k));
  return rate;
}

double fp_objective(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                    const Scenario& scn) {
  if ((state.rho.array() < 0.0).any()) throw PreconditionError("fp_objective: rho must be nonnegative");
  const LinkTerms t = link_terms(state, channels, assoc);
  double value = 0.0;
  double quadratic = 0.0;
  for (Index k = 0; k < scn.user_count; ++k) {
    const double w = scn.weights(k);
    const double rho = state.rho(k);
    const Complex xi = state.xi(k);
    value += w * std::log2(1.0 + rho);
    quadratic += -w * rho + 2.0 * std::sqrt(w * (1.0 + rho)) * std::real(std::conj(xi) * t.desired(k)) -
                 std::norm(xi) * (t.received(k) + scn.noise_mw(k));
  }
  return value + quadratic / std::numbers::ln2;
}

double beam_surrogate(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                      const Scenario& scn) {
  const LinkTerms t = link_terms(state, channels, assoc);
  double value = 0.0;
  for (Index k = 0; k < scn.user_count; ++k) {
    const double w = scn.weights(k);
    value += 2.0 * std::sqrt(w * (1.0 + state.rho(k))) * std::real(std::conj(state.xi(k)) * t.desired(k));
    value -= std::norm(state.xi(k)) * t.received(k);
  }
  return value / std::numbers::ln2;
}

RVec update_rho(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                const Scenario& scn) {
  const LinkTerms t = link_terms(state, channels, assoc);
  RVec rho(scn.user_count);
  for (Index k = 0; k < scn.user_count; ++k) rho(k) = sinr_from(t, scn, k);
  return rho;
}

CVec update_xi(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
               const Scenario& scn) {
  const LinkTerms t = link_terms(state, channels, assoc);
  CVec xi(scn.user_count);
  for (Index k = 0; k < scn.user_count; ++k) {
    xi(k) = std::sqrt(scn.weights(k) * (1.0 + state.rho(k))) * t.desired(k) / (t.received(k) + scn.noise_mw(k));
  }
  return xi;
}

double transmit_power(const BeamformerState& state, const Association& assoc, Index l) {
  double p = 0.0;
  for (Index k : assoc.served[l]) p += (state.analog[l] * state.digital[l].col(k)).squaredNorm();
  return p;
}

}  // namespace coopbeam
