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

#include "coopbeam/manifold.hpp"
#include "coopbeam/objective.hpp"

namespace coopbeam {

/// Linear and quadratic coefficients of the analog subproblem for one BS, in
/// the variable x = conj(vec(F_RF)). The quadratic matrix factors as
/// stream_gram (x) channel_gram (Kronecker product).
struct AnalogTerms {
  CVec t;            // length N_T * N_RF
  CMat stream_gram;  // N_RF x N_RF: sum_j alpha(l,j) f_BB(l,j) f_BB(l,j)^H
  CMat channel_gram; // N_T x N_T:   sum_k |xi_k|^2 conj(h(l,k)) h(l,k)^T

  Index antennas() const { return channel_gram.rows(); }
  Index rf_chains() const { return stream_gram.rows(); }

  /// Dense quadratic matrix, stream_gram (x) channel_gram.
  CMat dense() const;
};

AnalogTerms analog_terms(Index l, const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                         const Scenario& scn);

/// Dense (t_l, T_l) pair for BS l.
std::pair<CVec, CMat> build_tl_Tl(Index l, const BeamformerState& state, const ChannelSet& channels,
                                  const Association& assoc, const Scenario& scn);

/// All BSs stacked into one quadratic over the product manifold.
struct StackedAnalogProblem {
  QuadraticObjective<double> objective;
  Index block_size = 0;  // N_T * N_RF (or the per-BS support size)
  Index bs_count = 0;
};

StackedAnalogProblem assemble_stacked(const std::vector<CVec>& t, const std::vector<CMat>& T);

/// Same stacked objective, applying each block through its Kronecker factors.
class KroneckerStackedObjective {
 public:
  /// The objective is multiplied by `scale`.
  explicit KroneckerStackedObjective(std::vector<AnalogTerms> terms, double scale = 1.0);

  Index dim() const { return dim_; }
  double value(const CVec& x) const;
  CVec gradient(const CVec& x) const;

 private:
  CVec apply(const CVec& x) const;

  std::vector<AnalogTerms> terms_;
  double scale_ = 1.0;
  Index dim_ = 0;
};

/// max |v_i| + max W_ii of the stacked problem, or 1 when that is zero.
double analog_scale(const std::vector<AnalogTerms>& terms);
double analog_scale(const CVec& v, const CMat& W);

/// Stacks conj(vec(F_l)) for every BS.
CVec vectorize_analog(const std::vector<CMat>& analog);

/// Inverse of vectorize_analog.
std::vector<CMat> reconstruct_analog(const CVec& f, Index bs_count, Index antennas, Index rf_chains);

struct AnalogSolveOptions {
  RcgConfig<double> rcg{.max_iters = 50};
  bool structured = true;  // false runs the dense stacked reference path
  // Rescale each subproblem to unit size before RCG so that grad_tol is
  // relative. Without it the absolute tolerance stops RCG at its start point
  // whenever the received powers are small.
  bool normalize = true;
};

struct AnalogSolution {
  std::vector<CMat> analog;
  int rcg_iterations = 0;
};

/// Fully connected analog update, warm-started from state.analog.
AnalogSolution solve_analog_fc(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                               const Scenario& scn, const AnalogSolveOptions& opts = {});

}  // namespace coopbeam
