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

#include "coopbeam/manifold.hpp"
#include "test_support.hpp"

using namespace coopbeam;
using namespace coopbeam::testing;

namespace {

QuadraticObjective<double> random_quadratic(Index n, Rng& rng, bool psd) {
  QuadraticObjective<double> q;
  const CMat A = random_complex(n, n, rng);
  q.W = psd ? CMat(A * A.adjoint()) : A;
  q.v = random_complex(n, 1, rng);
  return q;
}

}  // namespace

TEST_CASE("retraction lands on the manifold") {
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + rng.index(30);
    const CVec f = random_unit_modulus(n, rng);
    const CVec d = project_tangent(f, CVec(random_complex(n, 1, rng)));
    worst = std::max(worst, manifold_residual(retract(f, rng.uniform(0.0, 5.0), d)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("retraction with zero step is the identity") {
  Rng rng(2);
  const CVec f = random_unit_modulus(7, rng);
  CHECK((retract(f, 0.0, CVec(random_complex(7, 1, rng))) - f).norm() < 1e-15);
}

TEST_CASE("retraction through the origin is reported") {
  CVec f(2), d(2);
  f << 1.0, Complex(0, 1);
  d << -1.0, 0.0;
  CHECK_THROWS_AS(retract(f, 1.0, d), DegenerateRetraction);
}

TEST_CASE("Riemannian gradient is tangent") {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + rng.index(24);
    const auto q = random_quadratic(n, rng, trial % 2 == 0);
    const CVec f = random_unit_modulus(n, rng);
    worst = std::max(worst, tangency_residual(f, riemannian_grad(q, f)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("tangent projection is idempotent and transport stays tangent") {
  Rng rng(4);
  const CVec f = random_unit_modulus(9, rng);
  const CVec g = random_complex(9, 1, rng);
  const CVec p = project_tangent(f, g);
  CHECK((project_tangent(f, p) - p).norm() < 1e-14);
  const CVec f2 = random_unit_modulus(9, rng);
  CHECK(tangency_residual(f2, vector_transport(p, f2)) < 1e-14);
}

TEST_CASE("off-manifold points are rejected") {
  Rng rng(5);
  const auto q = random_quadratic(3, rng, true);
  CVec f = random_unit_modulus(3, rng);
  f(1) *= 1.1;
  CHECK_FALSE(on_manifold(f));
  CHECK_THROWS_AS(riemannian_grad(q, f), PreconditionError);
  CHECK_THROWS_AS(rcg_minimize(q, f, RcgConfig<double>{}), PreconditionError);
}

TEST_CASE("Euclidean gradient matches central differences") {
  Rng rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + rng.index(24);
    const auto q = random_quadratic(n, rng, trial % 2 == 0);
    const CVec x = random_complex(n, 1, rng);
    const CVec g = euclidean_grad(q, x);
    const CVec fd = finite_difference_gradient([&](const CVec& y) { return q.value(y); }, x);
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, fd.norm()));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gradient shape mismatch") {
  Rng rng(7);
  const auto q = random_quadratic(4, rng, true);
  CHECK_THROWS_AS(euclidean_grad(q, CVec(CVec::Ones(5))), ShapeError);
}

TEST_CASE("RCG decreases monotonically on PSD instances") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + rng.index(40);
    const auto q = random_quadratic(n, rng, true);
    const CVec f0 = random_unit_modulus(n, rng);
    const auto res = rcg_minimize(q, f0, RcgConfig<double>{});
    REQUIRE(res.values.size() == static_cast<std::size_t>(res.iterations) + 1);
    for (std::size_t i = 1; i < res.values.size(); ++i) CHECK(res.values[i] <= res.values[i - 1]);
    CHECK(manifold_residual(res.point) <= 1e-12);
    CHECK(res.values.back() == doctest::Approx(q.value(res.point)).epsilon(1e-12));
  }
}

TEST_CASE("multi-start RCG beats random search") {
  // The problem is nonconvex, so a single start may stop in a local minimum.
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = random_quadratic(6, rng, true);
    double best_random = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2000; ++i) best_random = std::min(best_random, q.value(random_unit_modulus(6, rng)));
    double best_rcg = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 10; ++s)
      best_rcg = std::min(best_rcg, rcg_minimize(q, random_unit_modulus(6, rng), RcgConfig<double>{}).values.back());
    CHECK(best_rcg <= best_random + 1e-9 * std::abs(best_random));
  }
}

TEST_CASE("single phase aligns with the linear term") {
  // f(x) = w - 2|v| cos(phi - arg v) on the unit circle.
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    QuadraticObjective<double> q;
    q.W = CMat::Constant(1, 1, rng.uniform(0.1, 3.0));
    q.v = CVec::Constant(1, std::polar(rng.uniform(0.1, 2.0), rng.uniform(-kPi, kPi)));
    const int grid = 200000;
    double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      const double phi = -kPi + 2.0 * kPi * i / grid;
      const double val = q.value(CVec::Constant(1, std::polar(1.0, phi)));
      if (val < best) {
        best = val;
        best_phi = phi;
      }
    }
    RcgConfig<double> cfg;
    cfg.grad_tol = 1e-20;
    const auto res = rcg_minimize(q, random_unit_modulus(1, rng), cfg);
    const double err = std::abs(std::remainder(std::arg(res.point(0)) - best_phi, 2.0 * kPi));
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("stopping rules") {
  Rng rng(11);
  const auto q = random_quadratic(5, rng, true);
  const CVec f0 = random_unit_modulus(5, rng);
  RcgConfig<double> cfg;
  cfg.max_iters = 0;
  const auto none = rcg_minimize(q, f0, cfg);
  CHECK(none.iterations == 0);
  CHECK(none.point == f0);

  cfg.max_iters = 500;
  cfg.grad_tol = 1e-10;
  const auto done = rcg_minimize(q, f0, cfg);
  CHECK((done.grad_norm2 < 1e-10 || done.iterations == 500));
}

TEST_CASE("config validation") {
  RcgConfig<double> bad;
  bad.contraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.grad_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.armijo_c = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("single precision instantiation") {
  Rng rng(12);
  QuadraticObjective<float> q;
  const CMat A = random_complex(4, 4, rng);
  q.W = (A * A.adjoint()).cast<std::complex<float>>();
  q.v = random_complex(4, 1, rng).cast<std::complex<float>>();
  const ComplexVector<float> f0 = random_unit_modulus(4, rng).cast<std::complex<float>>();
  RcgConfig<float> cfg;
  cfg.grad_tol = 1e-5f;
  const auto res = rcg_minimize(q, f0, cfg);
  CHECK(res.values.back() <= res.values.front());
  CHECK(manifold_residual(res.point) < 1e-5f);
}
