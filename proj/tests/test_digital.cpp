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

#include <doctest.h>

#include <cmath>

#include <Eigen/QR>

#include "coopbeam/digital.hpp"
#include "test_support.hpp"

using namespace coopbeam;
using namespace coopbeam::testing;

namespace {

// Random instance whose starting digital precoders meet the power budget.
Problem feasible_problem(Rng& rng, Index bs, Index users, Index antennas, Index rf) {
  Problem p = random_problem(rng, bs, users, antennas, rf);
  for (Index l = 0; l < bs; ++l) {
    const double pw = transmit_power(p.state, p.assoc, l);
    if (pw > p.scn.p_max_mw) p.state.digital[l] *= std::sqrt(p.scn.p_max_mw / pw) * rng.uniform(0.1, 1.0);
  }
  return p;
}

Problem random_instance(Rng& rng) {
  const Index bs = 1 + rng.index(3);
  const Index rf = 1 + rng.index(3);
  const Index antennas = rf * (1 + rng.index(4));
  const Index users = 1 + rng.index(std::min<Index>(6, bs * rf));
  return feasible_problem(rng, bs, users, antennas, rf);
}

}  // namespace

TEST_CASE("hermitian_pinv matches complete orthogonal decomposition") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + rng.index(6);
    const Index rank = 1 + rng.index(n);
    const CMat A = random_complex(n, rank, rng);
    const CMat M = A * A.adjoint();
    const CMat oracle = Eigen::CompleteOrthogonalDecomposition<CMat>(M).pseudoInverse();
    CHECK((hermitian_pinv(M) - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));
  }
  CHECK(hermitian_pinv(CMat::Zero(3, 3)).norm() == 0.0);
}

TEST_CASE("power budget is met with complementary slackness") {
  Rng rng(42);
  int active = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Problem p = random_instance(rng);
    const RVec beta = solve_digital(p.state, p.channels, p.assoc, p.scn);
    for (Index l = 0; l < p.channels.bs_count(); ++l) {
      const double pw = transmit_power(p.state, p.assoc, l);
      CHECK(beta(l) >= 0.0);
      CHECK(pw <= p.scn.p_max_mw * (1.0 + 1e-12));
      if (beta(l) > 0.0) {
        ++active;
        CHECK(std::abs(pw - p.scn.p_max_mw) <= 1e-6 * p.scn.p_max_mw);
      }
      CHECK(beta(l) * (p.scn.p_max_mw - pw) <= 1e-6 * p.scn.p_max_mw * std::max(1.0, beta(l)));
    }
  }
  CHECK(active > 50);
}

TEST_CASE("digital update never lowers the FP objective") {
  Rng rng(43);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Problem p = random_instance(rng);
    const double before = fp_objective(p.state, p.channels, p.assoc, p.scn);
    solve_digital(p.state, p.channels, p.assoc, p.scn);
    const double after = fp_objective(p.state, p.channels, p.assoc, p.scn);
    worst = std::max(worst, (before - after) / std::max(1.0, std::abs(before)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("closed form is stationary") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    Problem p = random_instance(rng);
    const RVec beta = solve_digital(p.state, p.channels, p.assoc, p.scn);
    for (Index l = 0; l < p.channels.bs_count(); ++l) {
      const DigitalSubproblem sub = digital_subproblem(l, p.state, p.channels, p.assoc, p.scn);
      const CMat A = sub.gamma + beta(l) * sub.gram;
      // Where A is singular the pseudo-inverse solves the normal equations on its range.
      if (Eigen::SelfAdjointEigenSolver<CMat>(A).eigenvalues().minCoeff() < 1e-8 * A.norm()) continue;
      for (Index k = 0; k < p.scn.user_count; ++k) {
        if (!p.assoc.serves(l, k)) {
          CHECK(p.state.digital[l].col(k).norm() == 0.0);
          continue;
        }
        const CVec r = A * p.state.digital[l].col(k) - sub.rhs.col(k);
        CHECK(r.norm() <= 1e-7 * std::max(1.0, sub.rhs.col(k).norm()));
      }
    }
  }
}

TEST_CASE("digital power is decreasing in beta") {
  Rng rng(45);
  const Problem p = feasible_problem(rng, 1, 3, 6, 3);
  const DigitalSubproblem sub = digital_subproblem(0, p.state, p.channels, p.assoc, p.scn);
  double prev = digital_power(0.0, sub, p.assoc);
  for (double beta = 0.01; beta < 100.0; beta *= 1.7) {
    const double cur = digital_power(beta, sub, p.assoc);
    CHECK(cur <= prev * (1.0 + 1e-12));
    prev = cur;
  }
}

TEST_CASE("bisection agrees with the generic route") {
  Rng rng(46);
  const Problem p = feasible_problem(rng, 1, 2, 4, 2);
  const DigitalSubproblem sub = digital_subproblem(0, p.state, p.channels, p.assoc, p.scn);
  const double p0 = digital_power(0.0, sub, p.assoc);
  const BetaSolution sol = bisect_beta(sub, p.assoc, 0.5 * p0);
  CHECK(sol.beta > 0.0);
  CHECK(digital_power(sol.beta, sub, p.assoc) == doctest::Approx(sol.power).epsilon(1e-9));
  CHECK(sol.power == doctest::Approx(0.5 * p0).epsilon(1e-6));
  const BetaSolution loose = bisect_beta(sub, p.assoc, 2.0 * p0);
  CHECK(loose.beta == 0.0);
  CHECK_THROWS_AS(bisect_beta(sub, p.assoc, 0.0), PreconditionError);
  CHECK_THROWS_AS(fbb_closed_form(0, -1.0, sub, p.assoc), PreconditionError);
}

TEST_CASE("single-stream matched filter") {
  // One BS, one user, F = [1...1]^T: the optimum is matched filtering at full power.
  ScenarioConfig cfg;
  cfg.bs_count = 1;
  cfg.user_count = 1;
  cfg.antennas = 4;
  cfg.rf_chains = 1;
  cfg.p_max_dbm = 0.0;
  const Scenario scn = make_scenario(cfg);
  ChannelSet ch;
  CMat H(4, 1);
  H << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0.5, 0.5);
  ch.per_bs = {H};
  const Association a = Association::from_assignment({0}, 1);
  BeamformerState s = BeamformerState::zeros(1, 1, 4, 1);
  s.analog[0] = CMat::Ones(4, 1);
  s.rho(0) = 1.0;
  s.xi(0) = 0.3;
  solve_digital(s, ch, a, scn);
  CHECK(transmit_power(s, a, 0) == doctest::Approx(scn.p_max_mw).epsilon(1e-6));
  CHECK(s.digital[0].rows() == 1);
}
