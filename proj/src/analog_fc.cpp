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

#include "coopbeam/analog_fc.hpp"

#include <algorithm>
#include <cmath>

namespace coopbeam {

CMat AnalogTerms::dense() const {
  const Index nt = antennas();
  const Index nrf = rf_chains();
  CMat T(nt * nrf, nt * nrf);
  for (Index r = 0; r < nrf; ++r)
    for (Index s = 0; s < nrf; ++s) T.block(r * nt, s * nt, nt, nt) = stream_gram(r, s) * channel_gram;
  return T;
}

AnalogTerms analog_terms(Index l, const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                         const Scenario& scn) {
  const CMat& H = channels.per_bs[l];
  const CMat& B = state.digital[l];
  const Index nt = H.rows();
  const Index nrf = B.rows();
  if (state.analog[l].rows() != nt || state.analog[l].cols() != nrf || B.cols() != H.cols())
    throw ShapeError("analog_terms: state does not match the channel dimensions");

  AnalogTerms out;
  out.t = CVec::Zero(nt * nrf);
  out.stream_gram = CMat::Zero(nrf, nrf);
  out.channel_gram = CMat::Zero(nt, nt);
  for (Index k = 0; k < scn.user_count; ++k) {
    const double w = scn.weights(k);
    const double xi2 = std::norm(state.xi(k));
    if (xi2 > 0.0) out.channel_gram.selfadjointView<Eigen::Lower>().rankUpdate(H.col(k).conjugate(), xi2);
    if (!assoc.serves(l, k)) continue;
    out.stream_gram.selfadjointView<Eigen::Lower>().rankUpdate(B.col(k), 1.0);
    // (f_BB (x) conj(h)) scaled by sqrt(w (1 + rho)) conj(xi).
    const Complex c = std::sqrt(w * (1.0 + state.rho(k))) * std::conj(state.xi(k));
    for (Index r = 0; r < nrf; ++r) out.t.segment(r * nt, nt) += c * B(r, k) * H.col(k).conjugate();
  }
  out.stream_gram = out.stream_gram.selfadjointView<Eigen::Lower>();
  out.channel_gram = out.channel_gram.selfadjointView<Eigen::Lower>();
  return out;
}

std::pair<CVec, CMat> build_tl_Tl(Index l, const BeamformerState& state, const ChannelSet& channels,
                                  const Association& assoc, const Scenario& scn) {
  const AnalogTerms terms = analog_terms(l, state, channels, assoc, scn);
  return {terms.t, terms.dense()};
}

StackedAnalogProblem assemble_stacked(const std::vector<CVec>& t, const std::vector<CMat>& T) {
  if (t.size() != T.size() || t.empty()) throw ShapeError("assemble_stacked: need one (t, T) pair per BS");
  const Index block = t.front().size();
  const auto bs = static_cast<Index>(t.size());
  StackedAnalogProblem p;
  p.block_size = block;
  p.bs_count = bs;
  p.objective.v = CVec::Zero(bs * block);
  p.objective.W = CMat::Zero(bs * block, bs * block);
  for (Index l = 0; l < bs; ++l) {
    if (t[l].size() != block || T[l].rows() != block || T[l].cols() != block)
      throw ShapeError("assemble_stacked: inconsistent block sizes");
    p.objective.v.segment(l * block, block) = t[l];
    p.objective.W.block(l * block, l * block, block, block) = T[l];
  }
  return p;
}

KroneckerStackedObjective::KroneckerStackedObjective(std::vector<AnalogTerms> terms, double scale)
    : terms_(std::move(terms)), scale_(scale) {
  for (const auto& t : terms_) dim_ += t.t.size();
}

CVec KroneckerStackedObjective::apply(const CVec& x) const {
  if (x.size() != dim_) throw ShapeError("KroneckerStackedObjective: dimension mismatch");
  CVec out(dim_);
  Index offset = 0;
  for (const auto& t : terms_) {
    const Index nt = t.antennas();
    const Index nrf = t.rf_chains();
    const Eigen::Map<const CMat> X(x.data() + offset, nt, nrf);
    Eigen::Map<CMat>(out.data() + offset, nt, nrf) = scale_ * (t.channel_gram * X * t.stream_gram.transpose());
    offset += nt * nrf;
  }
  return out;
}

double KroneckerStackedObjective::value(const CVec& x) const {
  double v = std::real(x.dot(apply(x)));
  Index offset = 0;
  for (const auto& t : terms_) {
    v -= 2.0 * scale_ * std::real(x.segment(offset, t.t.size()).dot(t.t));
    offset += t.t.size();
  }
  return v;
}

CVec KroneckerStackedObjective::gradient(const CVec& x) const {
  // Every block is Hermitian, so (W + W^H) x = 2 W x.
  CVec g = 2.0 * apply(x);
  Index offset = 0;
  for (const auto& t : terms_) {
    g.segment(offset, t.t.size()) -= 2.0 * scale_ * t.t;
    offset += t.t.size();
  }
  return g;
}

double analog_scale(const std::vector<AnalogTerms>& terms) {
  double lin = 0.0, quad = 0.0;
  for (const auto& t : terms) {
    if (t.t.size() > 0) lin = std::max(lin, t.t.cwiseAbs().maxCoeff());
    if (t.t.size() > 0)
      quad = std::max(quad, t.stream_gram.diagonal().real().maxCoeff() * t.channel_gram.diagonal().real().maxCoeff());
  }
  const double s = lin + quad;
  return s > 0.0 ? s : 1.0;
}

double analog_scale(const CVec& v, const CMat& W) {
  const double s = (v.size() > 0 ? v.cwiseAbs().maxCoeff() + W.diagonal().real().maxCoeff() : 0.0);
  return s > 0.0 ? s : 1.0;
}

CVec vectorize_analog(const std::vector<CMat>& analog) {
  Index n = 0;
  for (const auto& F : analog) n += F.size();
  CVec f(n);
  Index offset = 0;
  for (const auto& F : analog) {
    f.segment(offset, F.size()) = F.reshaped().conjugate();
    offset += F.size();
  }
  return f;
}

std::vector<CMat> reconstruct_analog(const CVec& f, Index bs_count, Index antennas, Index rf_chains) {
  const Index block = antennas * rf_chains;
  if (f.size() != bs_count * block) throw ShapeError("reconstruct_analog: length mismatch");
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(bs_count));
  for (Index l = 0; l < bs_count; ++l)
    out.push_back(f.segment(l * block, block).conjugate().reshaped(antennas, rf_chains));
  return out;
}

AnalogSolution solve_analog_fc(const BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                               const Scenario& scn, const AnalogSolveOptions& opts) {
  const Index bs = channels.bs_count();
  const Index nt = channels.antennas();
  const Index nrf = state.analog.front().cols();
  std::vector<AnalogTerms> terms;
  terms.reserve(static_cast<std::size_t>(bs));
  for (Index l = 0; l < bs; ++l) terms.push_back(analog_terms(l, state, channels, assoc, scn));

  const CVec f0 = vectorize_analog(state.analog);
  RcgResult<double> result;
  const double scale = opts.normalize ? 1.0 / analog_scale(terms) : 1.0;
  if (opts.structured) {
    result = rcg_minimize(KroneckerStackedObjective(std::move(terms), scale), f0, opts.rcg);
  } else {
    std::vector<CVec> t;
    std::vector<CMat> T;
    for (const auto& term : terms) {
      t.push_back(scale * term.t);
      T.push_back(scale * term.dense());
    }
    result = rcg_minimize(assemble_stacked(t, T).objective, f0, opts.rcg);
  }
  return {reconstruct_analog(result.point, bs, nt, nrf), result.iterations};
}

}  // namespace coopbeam
