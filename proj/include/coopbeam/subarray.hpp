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

#include "coopbeam/analog_fc.hpp"
#include "coopbeam/rng.hpp"

namespace coopbeam {

/// Contiguous antenna blocks: RF chain r drives rows r*N_sub .. (r+1)*N_sub - 1.
struct FixedSubarrayLayout {
  Index antennas = 0;
  Index rf_chains = 0;

  FixedSubarrayLayout(Index antennas, Index rf_chains);

  Index per_subarray() const { return antennas / rf_chains; }

  /// Positions inside conj(vec(F_RF)) that the subarray keeps, RF chain major.
  std::vector<Index> selection() const;

  /// The N_T x (N_T N_RF) 0/1 selection matrix.
  RMat selection_matrix() const;

  /// Block diagonal mask, N_T x N_RF.
  Eigen::MatrixXi mask() const;
};

/// Per-BS antenna partition S(l, q) with its binary connection matrix V_l.
struct AntennaGrouping {
  std::vector<std::vector<std::vector<Index>>> sets;  // [l][q] -> ascending antenna indices

  Eigen::MatrixXi connection(Index l, Index antennas) const;

  /// Cover, disjointness and nonemptiness for every BS.
  bool is_partition(Index antennas) const;
};

/// Restriction of a BS's analog terms to the positions in `support`
/// (indices into conj(vec(F_RF))).
std::pair<CVec, CMat> restrict_terms(const AnalogTerms& terms, const std::vector<Index>& support);

/// Analog update where BS l may only use the entries of conj(vec(F_RF_l))
/// listed in supports[l]; every other entry is held at exactly zero.
AnalogSolution solve_masked_analog(const BeamformerState& state, const ChannelSet& channels,
                                   const Association& assoc, const Scenario& scn,
                                   const std::vector<std::vector<Index>>& supports,
                                   const AnalogSolveOptions& opts = {});

/// Fixed subarray analog update (block diagonal F_RF).
AnalogSolution solve_analog_fs(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                               const Scenario& scn, const AnalogSolveOptions& opts = {});

/// (1/|S|) sum_{i,j in S} |R_S(i,j)| for an already restricted matrix.
double correlation_within(const CMat& restricted);

/// Same metric, restricting R to the index set S first.
double correlation_within(const CMat& R, const std::vector<Index>& S);

/// (1/(|Si||Sj|)) sum_{m in Si, n in Sj} |R(m,n)|.
double correlation_between(const std::vector<Index>& Si, const std::vector<Index>& Sj, const CMat& R);

/// sum_q correlation_within(R, S_q).
double grouping_objective(const CMat& R, const std::vector<std::vector<Index>>& sets);

struct KmeansTrace {
  std::vector<double> objective;  // one entry per assignment round
  int rounds = 0;
};

/// Clusters the rows of one BS's analog matrix by phase correlation.
std::vector<std::vector<Index>> group_antennas(const CMat& analog_fc, Index rf_chains, int max_iters, Rng& rng,
                                               KmeansTrace* trace = nullptr);

AntennaGrouping kmeans_antenna_grouping(const std::vector<CMat>& analog_fc, Index rf_chains, int max_iters,
                                        Rng& rng);

/// F_fc o V for every BS.
std::vector<CMat> apply_grouping(const std::vector<CMat>& analog_fc, const AntennaGrouping& grouping);

struct DynamicSubarraySolution {
  std::vector<CMat> analog;     // masked, one nonzero per row
  std::vector<CMat> analog_fc;  // unmasked fully connected solution
  AntennaGrouping grouping;
  int rcg_iterations = 0;
};

/// Dynamic subarray analog update: fully connected solve warm-started from
/// `analog_fc`, then antenna grouping, then masking. A non-null
/// `fixed_grouping` skips the grouping step.
DynamicSubarraySolution solve_analog_ds(const BeamformerState& state, const ChannelSet& channels,
                                        const Association& assoc, const Scenario& scn,
                                        const std::vector<CMat>& analog_fc, Rng& rng, int kmeans_iters = 50,
                                        const AnalogSolveOptions& opts = {},
                                        const AntennaGrouping* fixed_grouping = nullptr);

}  // namespace coopbeam
