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

// Riemannian conjugate gradient on the complex circle manifold
// { f in C^n : |f(i)| = 1 for all i }.
//
// The solver is generic over an objective type exposing
//   Scalar value(const Vector&) const;      // real objective
//   Vector gradient(const Vector&) const;   // Euclidean gradient, df/dRe + j df/dIm
//   Index dim() const;
// QuadraticObjective below is the dense reference model.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "coopbeam/types.hpp"

namespace coopbeam {

struct DegenerateRetraction : NumericalError {
  DegenerateRetraction() : NumericalError("retract: point collapsed to the origin") {}
};

/// f(x) = x^H W x - 2 Re{x^H v}.
template <class Scalar>
struct QuadraticObjective {
  using Vector = ComplexVector<Scalar>;
  using Matrix = ComplexMatrix<Scalar>;

  Matrix W;
  Vector v;

  Index dim() const { return v.size(); }

  Scalar value(const Vector& x) const {
    return std::real(x.dot(W * x)) - Scalar(2) * std::real(x.dot(v));
  }

  Vector gradient(const Vector& x) const {
    if (x.size() != v.size() || W.rows() != v.size() || W.cols() != v.size())
      throw ShapeError("euclidean_grad: dimension mismatch");
    return W * x + W.adjoint() * x - Scalar(2) * v;
  }
};

template <class Scalar>
struct RcgConfig {
  int max_iters = 200;
  Scalar grad_tol = Scalar(1e-6);  // on the squared Riemannian gradient norm
  // Largest elementwise displacement of the first trial step.
  Scalar initial_step = Scalar(1);
  Scalar contraction = Scalar(0.5);
  Scalar armijo_c = Scalar(1e-4);
  int max_backtracks = 50;

  void validate() const {
    if (max_iters < 0) throw ConfigError("rcg.max_iters: must be nonnegative");
    if (!(grad_tol > 0)) throw ConfigError("rcg.grad_tol: must be positive");
    if (!(initial_step > 0)) throw ConfigError("rcg.initial_step: must be positive");
    if (!(contraction > 0 && contraction < 1)) throw ConfigError("rcg.contraction: must lie in (0, 1)");
    if (!(armijo_c > 0 && armijo_c < 1)) throw ConfigError("rcg.armijo_c: must lie in (0, 1)");
    if (max_backtracks < 1) throw ConfigError("rcg.max_backtracks: must be positive");
  }
};

template <class Scalar>
struct RcgResult {
  ComplexVector<Scalar> point;
  int iterations = 0;
  Scalar grad_norm2 = 0;
  std::vector<Scalar> values;  // objective at every accepted iterate, starting with f0
};

template <class Scalar>
Scalar manifold_residual(const ComplexVector<Scalar>& f) {
  if (f.size() == 0) return Scalar(0);
  return (f.cwiseAbs().array() - Scalar(1)).abs().maxCoeff();
}

template <class Scalar>
bool on_manifold(const ComplexVector<Scalar>& f, Scalar tol = Scalar(1e-9)) {
  return manifold_residual(f) <= tol;
}

/// Orthogonal projection onto the tangent space at f: g - Re{g o conj(f)} o f.
template <class Scalar>
ComplexVector<Scalar> project_tangent(const ComplexVector<Scalar>& f, const ComplexVector<Scalar>& g) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> radial = g.cwiseProduct(f.conjugate()).real();
  return g - radial.template cast<std::complex<Scalar>>().cwiseProduct(f);
}

/// Max_i |Re{g(i) conj(f(i))}|.
template <class Scalar>
Scalar tangency_residual(const ComplexVector<Scalar>& f, const ComplexVector<Scalar>& g) {
  if (f.size() == 0) return Scalar(0);
  return g.cwiseProduct(f.conjugate()).real().cwiseAbs().maxCoeff();
}

template <class Objective, class Scalar>
ComplexVector<Scalar> euclidean_grad(const Objective& obj, const ComplexVector<Scalar>& f) {
  return obj.gradient(f);
}

template <class Objective, class Scalar>
ComplexVector<Scalar> riemannian_grad(const Objective& obj, const ComplexVector<Scalar>& f) {
  if (!on_manifold(f)) throw PreconditionError("riemannian_grad: point is off the manifold");
  return project_tangent(f, obj.gradient(f));
}

/// Elementwise normalization of f + step * d.
template <class Scalar>
ComplexVector<Scalar> retract(const ComplexVector<Scalar>& f, Scalar step, const ComplexVector<Scalar>& d) {
  ComplexVector<Scalar> out = f + step * d;
  for (Index i = 0; i < out.size(); ++i) {
    const Scalar m = std::abs(out(i));
    if (m < Scalar(1e-14)) throw DegenerateRetraction();
    out(i) /= m;
  }
  return out;
}

/// Moves a tangent vector to the tangent space at f_new by projection.
template <class Scalar>
ComplexVector<Scalar> vector_transport(const ComplexVector<Scalar>& d_prev, const ComplexVector<Scalar>& f_new) {
  return project_tangent(f_new, d_prev);
}

/// Minimizes obj over the circle manifold from f0 with Polak-Ribiere+
/// conjugate directions and Armijo backtracking.
template <class Objective, class Scalar = double>
RcgResult<Scalar> rcg_minimize(const Objective& obj, const ComplexVector<Scalar>& f0, const RcgConfig<Scalar>& cfg) {
  using Vector = ComplexVector<Scalar>;
  cfg.validate();
  if (!on_manifold(f0)) throw PreconditionError("rcg_minimize: f0 is off the manifold");

  RcgResult<Scalar> out;
  Vector x = f0;
  Scalar fx = obj.value(x);
  Vector g = project_tangent(x, obj.gradient(x));
  Scalar g2 = g.squaredNorm();
  Vector d = -g;
  out.values.push_back(fx);

  int iter = 0;
  while (iter < cfg.max_iters && g2 >= cfg.grad_tol) {
    Scalar slope = std::real(g.dot(d));
    bool steepest = false;
    if (!(slope < 0)) {
      d = -g;
      slope = -g2;
      steepest = true;
    }

    bool accepted = false;
    Vector x_new;
    Scalar f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const Scalar dmax = d.cwiseAbs().maxCoeff();
      Scalar t = cfg.initial_step / dmax;
      for (int b = 0; b < cfg.max_backtracks; ++b, t *= cfg.contraction) {
        try {
          x_new = retract(x, t, d);
        } catch (const DegenerateRetraction&) {
          continue;
        }
        f_new = obj.value(x_new);
        if (f_new <= fx + cfg.armijo_c * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Conjugate direction failed; restart from steepest descent once.
        if (steepest) break;
        d = -g;
        slope = -g2;
        steepest = true;
      }
    }
    if (!accepted) break;

    const Vector g_new = project_tangent(x_new, obj.gradient(x_new));
    const Vector g_moved = vector_transport(g, x_new);
    const Vector d_moved = vector_transport(d, x_new);
    const Scalar pr = std::real(g_new.dot(g_new - g_moved)) / g2;
    d = -g_new + std::max(Scalar(0), pr) * d_moved;

    x = std::move(x_new);
    fx = f_new;
    g = g_new;
    g2 = g.squaredNorm();
    out.values.push_back(fx);
    ++iter;
  }

  out.point = std::move(x);
  out.iterations = iter;
  out.grad_norm2 = g2;
  return out;
}

}  // namespace coopbeam
