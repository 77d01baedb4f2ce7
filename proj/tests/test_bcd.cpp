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

#include "coopbeam/bcd.hpp"
#include "test_support.hpp"

using namespace coopbeam;
using namespace coopbeam::testing;

namespace {

constexpr Architecture kAll[] = {Architecture::kFullyDigital, Architecture::kFullyConnected,
                                 Architecture::kFixedSubarray, Architecture::kDynamicSubarray};

bool support_matches(const CMat& F, const Eigen::MatrixXi& V) {
  return ((F.cwiseAbs().array() > 0.0).cast<int>() == V.array()).all();
}

Scenario default_scenario() { return make_scenario(ScenarioConfig{}); }

struct Instance {
  Scenario scn;
  ChannelSet channels;
  Association assoc;
};

Instance small_instance(std::uint64_t seed, double noise_dbm) {
  ScenarioConfig cfg;
  cfg.bs_count = 2;
  cfg.user_count = 4;
  cfg.antennas = 8;
  cfg.rf_chains = 2;
  cfg.noise_dbm = noise_dbm;
  Rng rng(seed);
  auto [scn, ch] = generate_scenario(cfg, rng);
  Association a = stable_match(ch, scn);
  return {scn, ch, a};
}

}  // namespace

TEST_CASE("hardware power model") {
  Scenario scn = default_scenario();
  scn.p_max_mw = 10.0;
  CHECK(circuit_power(Architecture::kFullyDigital, scn) == 14400.0);
  CHECK(hardware_power(Architecture::kFullyDigital, scn) == 43830.0);
  CHECK(circuit_power(Architecture::kFullyConnected, scn) == 4500.0);
  CHECK(circuit_power(Architecture::kFixedSubarray, scn) == 2100.0);
  CHECK(circuit_power(Architecture::kDynamicSubarray, scn) == 2340.0);
  CHECK(hardware_power(Architecture::kDynamicSubarray, scn) == 3.0 * (10.0 + 200.0 + 2340.0));
}

TEST_CASE("architecture names") {
  for (Architecture a : kAll) CHECK(parse_architecture(to_string(a)) == a);
  CHECK_THROWS_AS(parse_architecture("hybrid"), ConfigError);
}

TEST_CASE("single user fully digital reaches capacity") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    ScenarioConfig cfg;
    cfg.bs_count = 1;
    cfg.user_count = 1;
    cfg.antennas = 4 + 4 * rng.index(3);
    cfg.rf_chains = 1;
    cfg.p_max_dbm = rng.uniform(0.0, 30.0);
    const Scenario scn = make_scenario(cfg);
    ChannelSet ch;
    ch.per_bs = {random_complex(cfg.antennas, 1, rng)};
    const Association a = Association::from_assignment({0}, 1);
    Rng solver(trial);
    const BcdResult r = bcd_solve(Architecture::kFullyDigital, ch, a, scn, solver);
    const double capacity = std::log2(1.0 + scn.p_max_mw * ch.per_bs[0].squaredNorm() / scn.noise_mw(0));
    CHECK(r.sum_rate == doctest::Approx(capacity).epsilon(1e-6));
  }
}

TEST_CASE("zero channels terminate at once") {
  const Scenario scn = default_scenario();
  const ChannelSet ch = ChannelSet::zeros(3, 9, 48);
  Association a = Association::from_assignment({0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);
  for (Architecture arch : kAll) {
    Rng rng(62);
    const BcdResult r = bcd_solve(arch, ch, a, scn, rng);
    CHECK(r.sum_rate == 0.0);
    CHECK(r.iterations == 0);
  }
}

TEST_CASE("trace is monotone and final state is feasible") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance in = small_instance(seed, seed % 2 == 0 ? -20.0 : -60.0);
    for (Architecture arch : kAll) {
      CAPTURE(to_string(arch));
      Rng rng(seed);
      const BcdResult r = bcd_solve(arch, in.channels, in.assoc, in.scn, rng);
      REQUIRE(r.trace.size() >= 1);
      CHECK(r.iterations <= 50);
      for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-8);

      const BeamformerState& s = r.state;
      for (Index l = 0; l < in.scn.bs_count; ++l) {
        CHECK(transmit_power(s, in.assoc, l) <= in.scn.p_max_mw * (1.0 + 1e-9));
        const CMat& F = s.analog[l];
        if (arch == Architecture::kFullyDigital) {
          CHECK(F == CMat::Identity(8, 8));
          continue;
        }
        for (Index i = 0; i < F.rows(); ++i) {
          int connected = 0;
          for (Index q = 0; q < F.cols(); ++q) {
            const double m = std::abs(F(i, q));
            CHECK((m == 0.0 || std::abs(m - 1.0) <= 1e-12));
            connected += m > 0.0;
          }
          if (arch == Architecture::kFullyConnected) CHECK(connected == F.cols());
          if (arch == Architecture::kFixedSubarray) CHECK(std::abs(F(i, i / 4)) > 0.0);
          if (arch != Architecture::kFullyConnected) CHECK(connected == 1);
        }
      }
      if (arch == Architecture::kDynamicSubarray) {
        CHECK(r.grouping.is_partition(8));
        for (Index l = 0; l < in.scn.bs_count; ++l)
          CHECK(support_matches(s.analog[l], r.grouping.connection(l, 8)));
      }

      // Tightness at the final point.
      BeamformerState t = s;
      t.rho = update_rho(t, in.channels, in.assoc, in.scn);
      t.xi = update_xi(t, in.channels, in.assoc, in.scn);
      CHECK(rel_err(fp_objective(t, in.channels, in.assoc, in.scn), r.sum_rate) <= 1e-6);
      CHECK(r.sum_rate == doctest::Approx(weighted_sum_rate(s, in.channels, in.assoc, in.scn)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dynamic subarray warm start") {
  const Instance in = small_instance(7, -50.0);
  Rng a(1), b(1);
  const BcdResult ds = bcd_solve(Architecture::kDynamicSubarray, in.channels, in.assoc, in.scn, a);
  const BcdResult fc = bcd_solve(Architecture::kFullyConnected, in.channels, in.assoc, in.scn, b);
  CHECK(ds.warm_start_iterations == fc.iterations);
  CHECK(ds.trace.front() <= fc.sum_rate + 1e-9);
}

TEST_CASE("architectures rank on a high SNR instance") {
  double fd = 0, fc = 0, fs = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance in = small_instance(100 + seed, -60.0);
    Rng r1(seed), r2(seed), r3(seed);
    fd += bcd_solve(Architecture::kFullyDigital, in.channels, in.assoc, in.scn, r1).sum_rate;
    fc += bcd_solve(Architecture::kFullyConnected, in.channels, in.assoc, in.scn, r2).sum_rate;
    fs += bcd_solve(Architecture::kFixedSubarray, in.channels, in.assoc, in.scn, r3).sum_rate;
  }
  CHECK(fd >= fc);
  CHECK(fc >= fs);
}

TEST_CASE("solver input checks") {
  const Instance in = small_instance(8, -20.0);
  Association bad = Association::from_assignment({0, 0, 0, 1}, 2);
  Rng rng(1);
  CHECK_THROWS_AS(bcd_solve(Architecture::kFullyConnected, in.channels, bad, in.scn, rng), PreconditionError);
}

TEST_CASE("plateau detection") {
  CHECK(iterations_to_plateau({1.0, 2.0, 2.5, 2.5001, 2.50011}, 1e-3) == 3);
  CHECK(iterations_to_plateau({1.0, 1.0}, 1e-3) == 1);
  CHECK(iterations_to_plateau({1.0, 2.0, 3.0}, 1e-3) == 2);
  CHECK(iterations_to_plateau({5.0}, 1e-3) == 0);
}
