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

#include "coopbeam/association.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace coopbeam {

Index Association::serving_bs(Index k) const {
  for (Index l = 0; l < alpha.rows(); ++l)
    if (alpha(l, k) != 0) return l;
  return -1;
}

bool Association::is_valid(Index capacity) const {
  if ((alpha.colwise().sum().array() != 1).any()) return false;
  if ((alpha.rowwise().sum().array() > capacity).any()) return false;
  for (Index l = 0; l < alpha.rows(); ++l)
    for (Index k : served[l])
      if (alpha(l, k) != 1) return false;
  return true;
}

Association Association::from_assignment(const std::vector<Index>& bs_of_user, Index bs_count) {
  Association a;
  const auto users = static_cast<Index>(bs_of_user.size());
  a.alpha = Eigen::MatrixXi::Zero(bs_count, users);
  a.served.assign(static_cast<std::size_t>(bs_count), {});
  for (Index k = 0; k < users; ++k) {
    const Index l = bs_of_user[k];
    if (l < 0) continue;
    a.alpha(l, k) = 1;
    a.served[l].push_back(k);
  }
  return a;
}

namespace {

std::vector<Index> ranked(Index n, auto&& key) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return key(a) > key(b); });
  return order;
}

}  // namespace

PreferenceRanking PreferenceRanking::from_gains(const RMat& gains) {
  PreferenceRanking prr;
  for (Index k = 0; k < gains.cols(); ++k)
    prr.user_prefs.push_back(ranked(gains.rows(), [&](Index l) { return gains(l, k); }));
  for (Index l = 0; l < gains.rows(); ++l)
    prr.bs_prefs.push_back(ranked(gains.cols(), [&](Index k) { return gains(l, k); }));
  return prr;
}

double channel_gain_metric(const Eigen::Ref<const CVec>& h) {
  const double n2 = h.squaredNorm();
  return n2 * n2;
}

RMat gain_matrix(const ChannelSet& channels) {
  RMat g(channels.bs_count(), channels.user_count());
  for (Index l = 0; l < g.rows(); ++l)
    for (Index k = 0; k < g.cols(); ++k) g(l, k) = channel_gain_metric(channels.h(l, k));
  return g;
}

double association_objective(const Association& assoc, const RMat& gains) {
  return (assoc.alpha.cast<double>().array() * gains.array()).sum();
}

Association stable_match(const RMat& gains, Index capacity, StableMatchLog* log) {
  const Index bs = gains.rows();
  const Index users = gains.cols();
  if (users > bs * capacity) throw PreconditionError("stable_match: K exceeds L*N_RF");

  const PreferenceRanking prr = PreferenceRanking::from_gains(gains);
  // Remaining candidate BSs per user, best first.
  std::vector<std::vector<Index>> user_list = prr.user_prefs;
  std::vector<Index> cursor(static_cast<std::size_t>(users), 0);
  std::vector<Index> bs_of_user(static_cast<std::size_t>(users), -1);
  std::vector<Index> load(static_cast<std::size_t>(bs), 0);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> removed =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(bs, users, false);
  Index proposals = 0;
  Index fallbacks = 0;
  Index unassigned = users;

  auto next_candidate = [&](Index k) -> Index {
    auto& c = cursor[k];
    while (c < bs && removed(user_list[k][c], k)) ++c;
    return c < bs ? user_list[k][c] : -1;
  };
  auto assign = [&](Index l, Index k) {
    bs_of_user[k] = l;
    --unassigned;
    if (++load[l] == capacity) {
      // Full BS leaves the BS set, hence every remaining ranking.
      for (Index j = 0; j < users; ++j)
        if (bs_of_user[j] < 0) removed(l, j) = true;
    }
  };

  while (unassigned > 0) {
    for (Index k = 0; k < users; ++k) {
      if (bs_of_user[k] >= 0) continue;
      const Index l_star = next_candidate(k);
      if (l_star < 0) {
        // Ranking exhausted: best BS that still has room.
        Index best = -1;
        for (Index l = 0; l < bs; ++l)
          if (load[l] < capacity && (best < 0 || gains(l, k) > gains(best, k))) best = l;
        assign(best, k);
        ++fallbacks;
        continue;
      }
      ++proposals;
      if (load[l_star] >= capacity) {
        removed(l_star, k) = true;
        continue;
      }
      Index k0 = -1;
      for (Index j : prr.bs_prefs[l_star])
        if (bs_of_user[j] < 0) {
          k0 = j;
          break;
        }
      if (k0 == k) {
        assign(l_star, k);
      } else {
        removed(l_star, k) = true;
      }
    }
  }

  if (log != nullptr) {
    log->removed = std::move(removed);
    log->proposals = proposals;
    log->fallbacks = fallbacks;
  }
  return Association::from_assignment(bs_of_user, bs);
}

Association stable_match(const ChannelSet& channels, const Scenario& scn, StableMatchLog* log) {
  return stable_match(gain_matrix(channels), scn.rf_chains, log);
}

Association exhaustive_match(const RMat& gains, Index capacity) {
  const Index bs = gains.rows();
  const Index users = gains.cols();
  if (users > 12 || bs > 4) throw SizeGuardError("exhaustive_match: instance too large (K <= 12, L <= 4)");
  if (users > bs * capacity) throw PreconditionError("exhaustive_match: K exceeds L*N_RF");

  std::vector<Index> current(static_cast<std::size_t>(users), -1);
  std::vector<Index> best;
  std::vector<Index> load(static_cast<std::size_t>(bs), 0);
  double best_value = -std::numeric_limits<double>::infinity();

  auto recurse = [&](auto&& self, Index k, double value) -> void {
    if (k == users) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (Index l = 0; l < bs; ++l) {
      if (load[l] >= capacity) continue;
      ++load[l];
      current[k] = l;
      self(self, k + 1, value + gains(l, k));
      --load[l];
    }
  };
  recurse(recurse, 0, 0.0);
  return Association::from_assignment(best, bs);
}

Association exhaustive_match(const ChannelSet& channels, const Scenario& scn) {
  return exhaustive_match(gain_matrix(channels), scn.rf_chains);
}

}  // namespace coopbeam
