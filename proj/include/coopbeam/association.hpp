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

#include "coopbeam/channel.hpp"
#include "coopbeam/types.hpp"

namespace coopbeam {

/// Binary BS-user matching. alpha(l, k) == 1 iff BS l serves user k.
struct Association {
  Eigen::MatrixXi alpha;
  std::vector<std::vector<Index>> served;  // users of each BS, ascending

  Index bs_count() const { return alpha.rows(); }
  Index user_count() const { return alpha.cols(); }
  bool serves(Index l, Index k) const { return alpha(l, k) != 0; }

  /// BS serving user k, or -1.
  Index serving_bs(Index k) const;

  /// Every user served exactly once and no BS above `capacity`.
  bool is_valid(Index capacity) const;

  /// Builds alpha and served sets from a user -> BS map.
  static Association from_assignment(const std::vector<Index>& bs_of_user, Index bs_count);
};

/// Preference lists, best first. Ties broken toward the lower index.
struct PreferenceRanking {
  std::vector<std::vector<Index>> user_prefs;  // per user: BS indices
  std::vector<std::vector<Index>> bs_prefs;    // per BS: user indices

  static PreferenceRanking from_gains(const RMat& gains);
};

/// Bookkeeping from a stable_match run, used by the stability checks.
struct StableMatchLog {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> removed;  // (l, k): l left k's ranking
  Index proposals = 0;
  Index fallbacks = 0;
};

/// |h^H h|^2 = ||h||^4.
double channel_gain_metric(const Eigen::Ref<const CVec>& h);

/// L x K matrix of channel_gain_metric values.
RMat gain_matrix(const ChannelSet& channels);

double association_objective(const Association& assoc, const RMat& gains);

Association stable_match(const RMat& gains, Index capacity, StableMatchLog* log = nullptr);
Association stable_match(const ChannelSet& channels, const Scenario& scn, StableMatchLog* log = nullptr);

/// Capacity-feasible assignment maximizing the summed gain. Small instances only.
Association exhaustive_match(const RMat& gains, Index capacity);
Association exhaustive_match(const ChannelSet& channels, const Scenario& scn);

}  // namespace coopbeam
