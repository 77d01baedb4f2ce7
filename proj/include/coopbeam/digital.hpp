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

#include "coopbeam/objective.hpp"

namespace coopbeam {

/// Per-BS data of the digital beamformer update with F_RF held fixed.
struct DigitalSubproblem {
  Index bs = 0;
  CMat gamma;  // N_RF x N_RF: sum_m |xi_m|^2 F^H h(l,m) h(l,m)^H F
  CMat gram;   // N_RF x N_RF: F^H F
  CMat rhs;    // N_RF x K, column k: sqrt(w_k (1 + rho_k)) xi_k F^H h(l,k), zero if unserved

  Index rf_chains() const { return gamma.rows(); }
};

DigitalSubproblem digital_subproblem(Index l, const BeamformerState& state, const ChannelSet& channels,
                                     const Association& assoc, const Scenario& scn);

/// Pseudoinverse of a Hermitian PSD matrix; eigenvalues below
/// rel_tol * max|eigenvalue| are dropped.
CMat hermitian_pinv(const CMat& A, double rel_tol = 1e-12);

/// f_BB(l, k) for a fixed multiplier: pinv(Gamma + beta F^H F) rhs_k.
CVec fbb_closed_form(Index k, double beta, const DigitalSubproblem& sub, const Association& assoc);

/// sum_k alpha(l,k) f_k^H (F^H F) f_k for the closed-form beams at beta.
double digital_power(double beta, const DigitalSubproblem& sub, const Association& assoc);

struct BetaSolution {
  double beta = 0.0;
  CMat digital;  // N_RF x K
  double power = 0.0;
  int bisection_steps = 0;
};

struct BisectionOptions {
  double power_rel_tol = 1e-8;
  int max_doublings = 100;
  int max_bisections = 200;
};

/// Multiplier meeting the power budget: beta = 0 when the unconstrained
/// solution fits, otherwise the root of power(beta) = P_max.
BetaSolution bisect_beta(const DigitalSubproblem& sub, const Association& assoc, double p_max,
                         const BisectionOptions& opts = {});

/// Updates every f_BB with F_RF, rho and xi held fixed. Returns beta per BS.
RVec solve_digital(BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                   const Scenario& scn, const BisectionOptions& opts = {});

}  // namespace coopbeam
