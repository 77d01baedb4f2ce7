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

#include "coopbeam/subarray.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coopbeam {

FixedSubarrayLayout::FixedSubarrayLayout(Index antennas, Index rf_chains) : antennas(antennas), rf_chains(rf_chains) {
  if (rf_chains < 1 || antennas < 1 || antennas % rf_chains != 0)
    throw ConfigError("N_T: must be divisible by N_RF for the fixed subarray");
}

std::vector<Index> FixedSubarrayLayout::selection() const {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(antennas));
  const Index sub = per_subarray();
  for (Index r = 0; r < rf_chains; ++r)
    for (Index i = 0; i < sub; ++i) idx.push_back(r * antennas + r * sub + i);
  return idx;
}

RMat FixedSubarrayLayout::selection_matrix() const {
  RMat E = RMat::Zero(antennas, antennas * rf_chains);
  const auto idx = selection();
  for (Index a = 0; a < static_cast<Index>(idx.size()); ++a) E(a, idx[a]) = 1.0;
  return E;
}

Eigen::MatrixXi FixedSubarrayLayout::mask() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(antennas, rf_chains);
  const Index sub = per_subarray();
  for (Index r = 0; r < rf_chains; ++r) m.block(r * sub, r, sub, 1).setOnes();
  return m;
}

Eigen::MatrixXi AntennaGrouping::connection(Index l, Index antennas) const {
  const auto& groups = sets[l];
  Eigen::MatrixXi V = Eigen::MatrixXi::Zero(antennas, static_cast<Index>(groups.size()));
  for (Index q = 0; q < static_cast<Index>(groups.size()); ++q)
    for (Index i : groups[q]) V(i, q) = 1;
  return V;
}

bool AntennaGrouping::is_partition(Index antennas) const {
  for (const auto& groups : sets) {
    std::vector<int> hits(static_cast<std::size_t>(antennas), 0);
    for (const auto& S : groups) {
      if (S.empty()) return false;
      for (Index i : S) {
        if (i < 0 || i >= antennas) return false;
        ++hits[i];
      }
    }
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
  }
  return true;
}

std::pair<CVec, CMat> restrict_terms(const AnalogTerms& terms, const std::vector<Index>& support) {
  const Index nt = terms.antennas();
  const auto n = static_cast<Index>(support.size());
  CVec t(n);
  CMat T(n, n);
  for (Index a = 0; a < n; ++a) {
    t(a) = terms.t(support[a]);
    const Index ra = support[a] / nt;
    const Index ia = support[a] % nt;
    for (Index b = 0; b < n; ++b) {
      const Index rb = support[b] / nt;
      const Index ib = support[b] % nt;
      T(a, b) = terms.stream_gram(ra, rb) * terms.channel_gram(ia, ib);
    }
  }
  return {t, T};
}

AnalogSolution solve_masked_analog(const BeamformerState& state, const ChannelSet& channels,
                                   const Association& assoc, const Scenario& scn,
                                   const std::vector<std::vector<Index>>& supports, const AnalogSolveOptions& opts) {
  const Index bs = channels.bs_count();
  if (static_cast<Index>(supports.size()) != bs) throw ShapeError("solve_masked_analog: one support per BS");
  const Index nt = channels.antennas();
  const Index nrf = state.analog.front().cols();

  std::vector<CVec> t;
  std::vector<CMat> T;
  std::vector<Complex> start;
  for (Index l = 0; l < bs; ++l) {
    auto [tl, Tl] = restrict_terms(analog_terms(l, state, channels, assoc, scn), supports[l]);
    t.push_back(std::move(tl));
    T.push_back(std::move(Tl));
    const CVec x = state.analog[l].reshaped().conjugate();
    for (Index p : supports[l]) {
      const double m = std::abs(x(p));
      start.push_back(m > 0.0 ? x(p) / m : Complex(1.0, 0.0));
    }
  }
  StackedAnalogProblem problem = assemble_stacked(t, T);
  if (opts.normalize) {
    const double scale = 1.0 / analog_scale(problem.objective.v, problem.objective.W);
    problem.objective.v *= scale;
    problem.objective.W *= scale;
  }
  const CVec f0 = Eigen::Map<const CVec>(start.data(), static_cast<Index>(start.size()));
  const RcgResult<double> result = rcg_minimize(problem.objective, f0, opts.rcg);

  AnalogSolution out;
  out.rcg_iterations = result.iterations;
  Index offset = 0;
  for (Index l = 0; l < bs; ++l) {
    CMat F = CMat::Zero(nt, nrf);
    for (Index p : supports[l]) F(p % nt, p / nt) = std::conj(result.point(offset++));
    out.analog.push_back(std::move(F));
  }
  return out;
}

AnalogSolution solve_analog_fs(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                               const Scenario& scn, const AnalogSolveOptions& opts) {
  const FixedSubarrayLayout layout(channels.antennas(), state.analog.front().cols());
  const std::vector<std::vector<Index>> supports(static_cast<std::size_t>(channels.bs_count()), layout.selection());
  return solve_masked_analog(state, channels, assoc, scn, supports, opts);
}

double correlation_within(const CMat& restricted) {
  if (restricted.rows() < 1) throw PreconditionError("correlation_within: empty set");
  return restricted.cwiseAbs().sum() / static_cast<double>(restricted.rows());
}

double correlation_within(const CMat& R, const std::vector<Index>& S) {
  if (S.empty()) throw PreconditionError("correlation_within: empty set");
  return correlation_between(S, S, R) * static_cast<double>(S.size());
}

double correlation_between(const std::vector<Index>& Si, const std::vector<Index>& Sj, const CMat& R) {
  if (Si.empty() || Sj.empty()) throw PreconditionError("correlation_between: empty set");
  double sum = 0.0;
  for (Index m : Si)
    for (Index n : Sj) sum += std::abs(R(m, n));
  return sum / (static_cast<double>(Si.size()) * static_cast<double>(Sj.size()));
}

double grouping_objective(const CMat& R, const std::vector<std::vector<Index>>& sets) {
  double total = 0.0;
  for (const auto& S : sets) total += correlation_within(R, S);
  return total;
}

namespace {

// Moves into each empty cluster the antenna least correlated with its own
// cluster, taken from a cluster that can spare one.
void repair_empty(std::vector<std::vector<Index>>& clusters, const RMat& mag) {
  for (auto& target : clusters) {
    if (!target.empty()) continue;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t from = 0;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto& S = clusters[c];
      if (S.size() < 2) continue;
      for (std::size_t a = 0; a < S.size(); ++a) {
        double s = 0.0;
        for (Index j : S) s += mag(S[a], j);
        s /= static_cast<double>(S.size());
        if (s < worst) {
          worst = s;
          from = c;
          pos = a;
        }
      }
    }
    target.push_back(clusters[from][pos]);
    clusters[from].erase(clusters[from].begin() + static_cast<std::ptrdiff_t>(pos));
  }
}

}  // namespace

std::vector<std::vector<Index>> group_antennas(const CMat& analog_fc, Index rf_chains, int max_iters, Rng& rng,
                                               KmeansTrace* trace) {
  const Index n = analog_fc.rows();
  if (rf_chains > n) throw ConfigError("N_RF: cannot exceed N_T for antenna grouping");
  if (rf_chains < 1) throw ConfigError("N_RF: must be at least 1");
  const CMat R = analog_fc * analog_fc.adjoint();
  const RMat mag = R.cwiseAbs();

  if (rf_chains == 1) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    if (trace != nullptr) {
      trace->objective = {grouping_objective(R, {all})};
      trace->rounds = 1;
    }
    return {all};
  }

  // Distinct random centroids (partial Fisher-Yates).
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::vector<Index> centroids(static_cast<std::size_t>(rf_chains));
  for (Index q = 0; q < rf_chains; ++q) {
    const Index pick = q + rng.index(n - q);
    std::swap(pool[q], pool[pick]);
    centroids[q] = pool[q];
  }

  std::vector<std::vector<Index>> clusters;
  std::vector<std::vector<Index>> previous;
  int rounds = 0;
  for (int iter = 0; iter < std::max(1, max_iters); ++iter) {
    clusters.assign(static_cast<std::size_t>(rf_chains), {});
    std::vector<double> row_sum(static_cast<std::size_t>(rf_chains), 0.0);
    std::vector<bool> is_centroid(static_cast<std::size_t>(n), false);
    for (Index q = 0; q < rf_chains; ++q) {
      clusters[q].push_back(centroids[q]);
      is_centroid[centroids[q]] = true;
    }
    for (Index i = 0; i < n; ++i) {
      if (is_centroid[i]) continue;
      Index best = 0;
      double best_score = -1.0;
      for (Index q = 0; q < rf_chains; ++q) {
        double s = 0.0;
        for (Index j : clusters[q]) s += mag(i, j);
        s /= static_cast<double>(clusters[q].size());
        if (s > best_score) {
          best_score = s;
          best = q;
        }
      }
      clusters[best].push_back(i);
    }
    repair_empty(clusters, mag);
    for (auto& S : clusters) std::sort(S.begin(), S.end());
    ++rounds;
    if (trace != nullptr) trace->objective.push_back(grouping_objective(R, clusters));
    if (clusters == previous) break;
    previous = clusters;

    // New centroid: the member with the largest mean correlation to its cluster.
    for (Index q = 0; q < rf_chains; ++q) {
      const auto& S = clusters[q];
      double best_score = -1.0;
      for (Index a : S) {
        double s = 0.0;
        for (Index j : S) s += mag(a, j);
        if (s > best_score) {
          best_score = s;
          centroids[q] = a;
        }
      }
    }
  }
  if (trace != nullptr) trace->rounds = rounds;
  return clusters;
}

AntennaGrouping kmeans_antenna_grouping(const std::vector<CMat>& analog_fc, Index rf_chains, int max_iters,
                                        Rng& rng) {
  AntennaGrouping g;
  for (const auto& F : analog_fc) {
    if (!on_manifold<double>(F.reshaped())) throw PreconditionError("kmeans_antenna_grouping: F_fc must be unit modulus");
    g.sets.push_back(group_antennas(F, rf_chains, max_iters, rng));
  }
  return g;
}

std::vector<CMat> apply_grouping(const std::vector<CMat>& analog_fc, const AntennaGrouping& grouping) {
  std::vector<CMat> out;
  for (std::size_t l = 0; l < analog_fc.size(); ++l) {
    const Eigen::MatrixXi V = grouping.connection(static_cast<Index>(l), analog_fc[l].rows());
    out.push_back(analog_fc[l].cwiseProduct(V.cast<Complex>()));
  }
  return out;
}

DynamicSubarraySolution solve_analog_ds(const BeamformerState& state, const ChannelSet& channels,
                                        const Association& assoc, const Scenario& scn,
                                        const std::vector<CMat>& analog_fc, Rng& rng, int kmeans_iters,
                                        const AnalogSolveOptions& opts, const AntennaGrouping* fixed_grouping) {
  BeamformerState fc_state = state;
  fc_state.analog = analog_fc;
  AnalogSolution fc = solve_analog_fc(fc_state, channels, assoc, scn, opts);

  DynamicSubarraySolution out;
  out.grouping = fixed_grouping != nullptr
                     ? *fixed_grouping
                     : kmeans_antenna_grouping(fc.analog, state.analog.front().cols(), kmeans_iters, rng);
  out.analog = apply_grouping(fc.analog, out.grouping);
  out.analog_fc = std::move(fc.analog);
  out.rcg_iterations = fc.rcg_iterations;
  return out;
}

}  // namespace coopbeam
