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

#include "coopbeam/digital.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace coopbeam {

DigitalSubproblem digital_subproblem(Index l, const BeamformerState& state, const ChannelSet& channels,
                                     const Association& assoc, const Scenario& scn) {
  const CMat& F = state.analog[l];
  const CMat& H = channels.per_bs[l];
  if (F.rows() != H.rows()) throw ShapeError("digital_subproblem: F_RF rows must equal N_T");
  const CMat G = F.adjoint() * H;  // column m: F^H h(l,m)

  DigitalSubproblem sub;
  sub.bs = l;
  sub.gram = F.adjoint() * F;
  sub.gamma = CMat::Zero(F.cols(), F.cols());
  sub.rhs = CMat::Zero(F.cols(), H.cols());
  for (Index m = 0; m < scn.user_count; ++m) {
    const double w = scn.weights(m);
    const double xi2 = std::norm(state.xi(m));
    if (xi2 > 0.0) sub.gamma.selfadjointView<Eigen::Lower>().rankUpdate(G.col(m), xi2);
    if (assoc.serves(l, m)) sub.rhs.col(m) = std::sqrt(w * (1.0 + state.rho(m))) * state.xi(m) * G.col(m);
  }
  sub.gamma = sub.gamma.selfadjointView<Eigen::Lower>();
  return sub;
}

CMat hermitian_pinv(const CMat& A, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(A);
  const RVec& lambda = es.eigenvalues();
  const double cutoff = rel_tol * lambda.cwiseAbs().maxCoeff();
  RVec inv = RVec::Zero(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda(i)) > cutoff && lambda(i) != 0.0) inv(i) = 1.0 / lambda(i);
  return es.eigenvectors() * inv.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CVec fbb_closed_form(Index k, double beta, const DigitalSubproblem& sub, const Association& assoc) {
  if (beta < 0.0) throw PreconditionError("fbb_closed_form: beta must be nonnegative");
  if (!assoc.serves(sub.bs, k)) return CVec::Zero(sub.rf_chains());
  return hermitian_pinv(sub.gamma + beta * sub.gram) * sub.rhs.col(k);
}

namespace {

CMat closed_form_all(double beta, const DigitalSubproblem& sub) {
  return hermitian_pinv(sub.gamma + beta * sub.gram) * sub.rhs;
}

double power_of(const CMat& digital, const DigitalSubproblem& sub) {
  return std::real((digital.adjoint() * sub.gram * digital).trace());
}

// power(beta) for beta > 0 in the basis that whitens F^H F = L L^H:
// f(beta) = L^{-H} U (Lambda + beta)^{-1} U^H L^{-1} rhs.
class WhitenedPower {
 public:
  explicit WhitenedPower(const DigitalSubproblem& sub) {
    Eigen::LLT<CMat> llt(sub.gram);
    if (llt.info() != Eigen::Success) return;
    L_ = llt.matrixL();
    // A badly conditioned F^H F would make the whitened route inaccurate.
    const RVec diag = L_.diagonal().real();
    if (!(diag.minCoeff() > 1e-6 * diag.maxCoeff())) return;
    const CMat Linv = L_.triangularView<Eigen::Lower>().solve(CMat::Identity(L_.rows(), L_.cols()));
    Eigen::SelfAdjointEigenSolver<CMat> es(Linv * sub.gamma * Linv.adjoint());
    lambda_ = es.eigenvalues().cwiseMax(0.0);
    U_ = es.eigenvectors();
    proj_ = U_.adjoint() * Linv * sub.rhs;
    ok_ = true;
  }

  bool ok() const { return ok_; }

  double power(double beta) const {
    double p = 0.0;
    for (Index i = 0; i < lambda_.size(); ++i) p += proj_.row(i).squaredNorm() / ((lambda_(i) + beta) * (lambda_(i) + beta));
    return p;
  }

  CMat beams(double beta) const {
    const RVec scale = (lambda_.array() + beta).inverse();
    const CMat y = U_ * (scale.cast<Complex>().asDiagonal() * proj_);
    return L_.adjoint().triangularView<Eigen::Upper>().solve(y);
  }

 private:
  bool ok_ = false;
  CMat L_;
  CMat U_;
  RVec lambda_;
  CMat proj_;
};

}  // namespace

double digital_power(double beta, const DigitalSubproblem& sub, const Association& assoc) {
  double p = 0.0;
  for (Index k = 0; k < sub.rhs.cols(); ++k) {
    if (!assoc.serves(sub.bs, k)) continue;
    const CVec f = fbb_closed_form(k, beta, sub, assoc);
    p += std::real(f.dot(sub.gram * f));
  }
  return p;
}

BetaSolution bisect_beta(const DigitalSubproblem& sub, const Association& assoc, double p_max,
                         const BisectionOptions& opts) {
  if (!(p_max > 0.0)) throw PreconditionError("bisect_beta: P_max must be positive");
  (void)assoc;  // rhs already carries the association mask

  BetaSolution out;
  out.digital = closed_form_all(0.0, sub);
  out.power = power_of(out.digital, sub);
  if (out.power <= p_max) return out;

  const WhitenedPower fast(sub);
  auto power = [&](double beta) { return fast.ok() ? fast.power(beta) : power_of(closed_form_all(beta, sub), sub); };

  double lo = 0.0;
  double hi = 1.0;
  double p_hi = power(hi);
  int doublings = 0;
  while (p_hi > p_max) {
    if (++doublings > opts.max_doublings) throw NumericalError("bisect_beta: bracket expansion failed");
    lo = hi;
    hi *= 2.0;
    p_hi = power(hi);
  }
  int steps = 0;
  while (p_max - p_hi > opts.power_rel_tol * p_max && steps < opts.max_bisections) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double p_mid = power(mid);
    if (p_mid > p_max) {
      lo = mid;
    } else {
      hi = mid;
      p_hi = p_mid;
    }
    ++steps;
  }

  out.beta = hi;
  out.digital = fast.ok() ? fast.beams(hi) : closed_form_all(hi, sub);
  out.power = power_of(out.digital, sub);
  out.bisection_steps = steps;
  return out;
}

RVec solve_digital(BeamformerState& state, const ChannelSet& channels, const Association& assoc,
                   const Scenario& scn, const BisectionOptions& opts) {
  RVec beta(channels.bs_count());
  for (Index l = 0; l < channels.bs_count(); ++l) {
    const DigitalSubproblem sub = digital_subproblem(l, state, channels, assoc, scn);
    BetaSolution sol = bisect_beta(sub, assoc, scn.p_max_mw, opts);
    state.digital[l] = std::move(sol.digital);
    beta(l) = sol.beta;
  }
  state.beta = beta;
  return beta;
}

}  // namespace coopbeam
