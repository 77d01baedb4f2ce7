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

// Shared fixtures and independent oracles for the test binaries.

#include <algorithm>
#include <numeric>
#include <vector>

#include "coopbeam/bcd.hpp"

namespace coopbeam::testing {

enum class Support { kFull, kFixed, kRandomPartition };

struct Problem {
  Scenario scn;
  ChannelSet channels;
  Association assoc;
  BeamformerState state;
};

inline CMat random_complex(Index rows, Index cols, Rng& rng, double var = 1.0) {
  CMat m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal(var);
  return m;
}

inline CVec random_unit_modulus(Index n, Rng& rng) {
  CVec f(n);
  for (Index i = 0; i < n; ++i) f(i) = std::polar(1.0, rng.uniform(-kPi, kPi));
  return f;
}

// Random association with at most `capacity` users per BS.
inline Association random_association(Index bs, Index users, Index capacity, Rng& rng) {
  std::vector<Index> slots;
  for (Index l = 0; l < bs; ++l)
    for (Index c = 0; c < capacity; ++c) slots.push_back(l);
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[static_cast<std::size_t>(rng.index(i))]);
  slots.resize(static_cast<std::size_t>(users));
  return Association::from_assignment(slots, bs);
}

// Random antenna partition of one BS into nonempty groups.
inline std::vector<std::vector<Index>> random_partition(Index antennas, Index groups, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(antennas));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.index(i))]);
  std::vector<std::vector<Index>> sets(static_cast<std::size_t>(groups));
  for (Index i = 0; i < antennas; ++i) sets[static_cast<std::size_t>(i < groups ? i : rng.index(groups))].push_back(perm[i]);
  for (auto& s : sets) std::sort(s.begin(), s.end());
  return sets;
}

// Unit-scale random instance: CN(0,1) channels, random noise and weights,
// random beams on the requested support, random auxiliaries.
inline Problem random_problem(Rng& rng, Index bs, Index users, Index antennas, Index rf_chains,
                              Support support = Support::kFull) {
  ScenarioConfig cfg;
  cfg.bs_count = bs;
  cfg.user_count = users;
  cfg.antennas = antennas;
  cfg.rf_chains = rf_chains;
  cfg.p_max_dbm = 0.0;
  Problem p;
  p.scn = make_scenario(cfg);
  for (Index k = 0; k < users; ++k) {
    p.scn.noise_mw(k) = rng.uniform(0.1, 1.0);
    p.scn.weights(k) = rng.uniform(0.5, 2.0);
  }
  p.channels.per_bs.clear();
  for (Index l = 0; l < bs; ++l) p.channels.per_bs.push_back(random_complex(antennas, users, rng));
  p.assoc = random_association(bs, users, rf_chains, rng);

  p.state = BeamformerState::zeros(bs, users, antennas, rf_chains);
  for (Index l = 0; l < bs; ++l) {
    CMat F = CVec(random_unit_modulus(antennas * rf_chains, rng)).reshaped(antennas, rf_chains);
    if (support == Support::kFixed) {
      F = F.cwiseProduct(FixedSubarrayLayout(antennas, rf_chains).mask().cast<Complex>());
    } else if (support == Support::kRandomPartition) {
      AntennaGrouping g;
      g.sets.push_back(random_partition(antennas, rf_chains, rng));
      F = F.cwiseProduct(g.connection(0, antennas).cast<Complex>());
    }
    p.state.analog[l] = F;
    CMat B = random_complex(rf_chains, users, rng, 0.1);
    for (Index k = 0; k < users; ++k)
      if (!p.assoc.serves(l, k)) B.col(k).setZero();
    p.state.digital[l] = B;
  }
  for (Index k = 0; k < users; ++k) {
    p.state.rho(k) = rng.uniform(0.0, 3.0);
    p.state.xi(k) = rng.complex_normal(1.0);
  }
  return p;
}

// Pairs (l, k) that both prefer each other to their current partners.
// A BS below capacity prefers any user to an empty slot. With a log, pairs
// whose BS was struck from the user's ranking during the run are exempt.
inline int count_blocking_pairs(const Association& a, const RMat& g, Index capacity,
                                const StableMatchLog* log = nullptr) {
  int pairs = 0;
  for (Index k = 0; k < a.user_count(); ++k) {
    const Index cur = a.serving_bs(k);
    for (Index l = 0; l < a.bs_count(); ++l) {
      if (l == cur || !(g(l, k) > g(cur, k))) continue;
      if (log != nullptr && log->removed(l, k)) continue;
      const auto& served = a.served[l];
      bool bs_wants = static_cast<Index>(served.size()) < capacity;
      for (Index j : served) bs_wants = bs_wants || g(l, k) > g(l, j);
      pairs += bs_wants;
    }
  }
  return pairs;
}

// Brute force over every user -> BS map.
inline double best_assignment_value(const RMat& g, Index capacity) {
  const Index bs = g.rows();
  const Index users = g.cols();
  std::vector<Index> map(static_cast<std::size_t>(users), 0);
  double best = -1.0;
  for (;;) {
    std::vector<Index> load(static_cast<std::size_t>(bs), 0);
    bool ok = true;
    double v = 0.0;
    for (Index k = 0; k < users; ++k) {
      ok = ok && ++load[static_cast<std::size_t>(map[k])] <= capacity;
      v += g(map[k], k);
    }
    if (ok) best = std::max(best, v);
    Index i = 0;
    while (i < users && ++map[i] == bs) map[i++] = 0;
    if (i == users) break;
  }
  return best;
}

// Central differences of a real function of a complex vector, returned in
// the same convention as the library gradients: d/dRe + j d/dIm.
template <class Fn>
CVec finite_difference_gradient(const Fn& f, const CVec& x, double h = 1e-6) {
  CVec g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    CVec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    const double re = (f(a) - f(b)) / (2 * h);
    a = x;
    b = x;
    a(i) += Complex(0, h);
    b(i) -= Complex(0, h);
    const double im = (f(a) - f(b)) / (2 * h);
    g(i) = {re, im};
  }
  return g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace coopbeam::testing
