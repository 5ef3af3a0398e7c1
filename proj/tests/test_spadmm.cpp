// Copyright 2026 The slp Authors
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

#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "slp/bench.hpp"
#include "slp/oracle.hpp"
#include "slp/spadmm.hpp"
#include "slp/sparse_proj.hpp"
#include "test_support.hpp"

namespace sa = slp::spadmm;
using slp::testing::ConvexifiedOptimum;
using slp::testing::MaxAbsDiff;
using slp::testing::TestRng;
using slp::testing::TwoBlockExample;
using V = std::vector<double>;

namespace {

V MatVec(const slp::Matrix& A, const V& x) {
  V y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) y[i] += A(i, j) * x[j];
  return y;
}

V MatTVec(const slp::Matrix& A, const V& y) {
  V x(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) x[j] += A(i, j) * y[i];
  return x;
}

// Gradient in y of the proximal y-subproblem, written from scratch:
//   -b + A w + sigma A (A^T y - z - c) + sigma P (y - y_k).
V YSubproblemGradient(const slp::Problem& p, const sa::SolverConfig& cfg,
                      const sa::YUpdateKernel& k, const sa::Iterate& it, const V& y) {
  const V aty = MatTVec(p.A, y);
  V inner(p.n());
  for (std::size_t j = 0; j < p.n(); ++j)
    inner[j] = it.w[j] + cfg.sigma * (aty[j] - it.z[j] - p.c[j]);
  V g = MatVec(p.A, inner);
  for (std::size_t i = 0; i < p.m(); ++i) g[i] -= p.b[i];
  if (k.mode == sa::YUpdateKernel::Mode::kSpectral) {
    V dy(p.m());
    for (std::size_t i = 0; i < p.m(); ++i) dy[i] = y[i] - it.y[i];
    const V aadY = MatVec(p.A, MatTVec(p.A, dy));
    for (std::size_t i = 0; i < p.m(); ++i)
      g[i] += cfg.sigma * (k.lambda_max * dy[i] - aadY[i]);
  }
  return g;
}

// z-subproblem objective: h(z) + sigma/2 ||d + w/sigma - z||^2 + sigma/2 ||z - z_k||_Q^2.
double ZSubproblemObjective(const slp::Problem& p, const sa::SolverConfig& cfg, const V& d,
                            const sa::Iterate& it, bool uniform, const V& z) {
  V lz(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) lz[j] = p.l[j] * z[j];
  double f = slp::sparse_proj::TopRPlusSum(lz, p.r);
  double lmin = p.l[0];
  for (double v : p.l) lmin = std::min(lmin, v);
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double a = d[j] + it.w[j] / cfg.sigma - z[j];
    f += 0.5 * cfg.sigma * a * a;
    if (!uniform) {
      const double q = p.l[j] * p.l[j] / (lmin * lmin) - 1.0;
      f += 0.5 * cfg.sigma * q * (z[j] - it.z[j]) * (z[j] - it.z[j]);
    }
  }
  return f;
}

slp::Problem RandomProblem(TestRng& rng, std::size_t m, std::size_t n, bool uniform) {
  auto p = slp::testing::RandomFeasibleProblem(rng, static_cast<int>(n), static_cast<int>(m),
                                               std::max(1, static_cast<int>(n) / 3));
  if (uniform) p.l.assign(n, p.l[0]);
  return p;
}

sa::Iterate RandomIterate(TestRng& rng, const slp::Problem& p) {
  return {rng.Normals(p.m()), rng.Normals(p.n()), rng.Normals(p.n())};
}

bool BitEqual(const V& a, const V& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("dual objective examples") {
  CHECK(sa::EvalDualObjective(TwoBlockExample(), V{0, 0}) == -2.0);
  slp::Problem p;
  p.A = slp::Matrix{{1, 2, 3}};
  p.b = {0};
  p.c = {0, 1, 2};
  p.l = {1, 1, 1};
  p.r = 2;
  CHECK(sa::EvalDualObjective(p, V{0}) == 0.0);
}

TEST_CASE("dual objective never exceeds the enumerated optimum") {
  TestRng rng(41);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.Int(3, 9);
    const int m = rng.Int(1, std::min(4, n - 1));
    const auto p = slp::testing::RandomFeasibleProblem(rng, n, m, rng.Int(1, n));
    const auto opt = slp::oracle::EnumerateOptimal(p);
    REQUIRE(opt.feasible);
    for (int k = 0; k < 50; ++k) {
      V y = rng.Normals(p.m());
      for (auto& v : y) v *= k < 25 ? 0.3 : 3.0;
      CHECK(sa::EvalDualObjective(p, y) <= opt.optimum + 1e-8);
    }
  }
}

TEST_CASE("y kernel mode selection") {
  slp::Problem p;
  p.A = slp::Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  p.b = {0, 0, 0};
  p.c = {0, 0, 0};
  p.l = {1, 1, 1};
  p.r = 1;
  auto k = sa::BuildYKernel(p, {});
  CHECK(k.mode == sa::YUpdateKernel::Mode::kFactorized);
  CHECK(k.chol == slp::Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});

  p.A = slp::Matrix{{1, 2, 3}, {1, 2, 3}};
  p.b = {0, 0};
  k = sa::BuildYKernel(p, {});
  CHECK(k.mode == sa::YUpdateKernel::Mode::kSpectral);
  CHECK(k.lambda_max == doctest::Approx(28.0).epsilon(1e-9));
  sa::SolverConfig force;
  force.y_mode = sa::YMode::kFactorize;
  CHECK_THROWS_AS(sa::BuildYKernel(p, force), slp::Error);

  p.A = slp::Matrix(1, 5, 1.0);
  p.b = {1};
  p.c.assign(5, 0.0);
  p.l.assign(5, 1.0);
  k = sa::BuildYKernel(p, {});
  REQUIRE(k.mode == sa::YUpdateKernel::Mode::kFactorized);
  CHECK(k.chol(0, 0) == doctest::Approx(std::sqrt(5.0)));

  p.A = slp::Matrix(1, 5, 0.0);
  CHECK_THROWS_AS(sa::BuildYKernel(p, {}), slp::Error);
}

TEST_CASE("spectral proximal term is positive semidefinite") {
  TestRng rng(42);
  for (int t = 0; t < 10; ++t) {
    auto p = RandomProblem(rng, 6, 12, true);
    for (std::size_t j = 0; j < p.n(); ++j) p.A(5, j) = p.A(0, j) - 2.0 * p.A(3, j);  // rank 5
    sa::SolverConfig cfg;
    cfg.y_mode = sa::YMode::kSpectral;
    cfg.rng_seed = static_cast<std::uint64_t>(t);
    const auto k = sa::BuildYKernel(p, cfg);
    REQUIRE(k.mode == sa::YUpdateKernel::Mode::kSpectral);
    for (int s = 0; s < 100; ++s) {
      const V v = rng.Normals(p.m());
      const V atv = MatTVec(p.A, v);
      const double quad = k.lambda_max * slp::Dot(v, v) - slp::Dot(atv, atv);
      CHECK(quad >= -1e-8 * slp::Dot(v, v));
    }
  }
}

TEST_CASE("update_y scalar example") {
  slp::Problem p;
  p.A = slp::Matrix{{1, 1}};
  p.b = {1};
  p.c = {0, 0};
  p.l = {1, 1};
  p.r = 1;
  const auto k = sa::BuildYKernel(p, {});
  const sa::Iterate it{{0}, {0, 0}, {0, 0}};
  const auto y = sa::UpdateY(k, p, {}, it);
  REQUIRE(y.size() == 1);
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("update_y stationarity in both modes") {
  TestRng rng(43);
  for (auto mode : {sa::YMode::kAuto, sa::YMode::kSpectral}) {
    for (int t = 0; t < 20; ++t) {
      const auto p = RandomProblem(rng, 5, 8, true);
      sa::SolverConfig cfg;
      cfg.sigma = rng.Uniform(0.2, 5.0);
      cfg.y_mode = mode;
      const auto k = sa::BuildYKernel(p, cfg);
      CHECK((mode == sa::YMode::kSpectral) == (k.mode == sa::YUpdateKernel::Mode::kSpectral));
      const auto it = RandomIterate(rng, p);
      const auto y = sa::UpdateY(k, p, cfg, it);
      CHECK(slp::NormInf(YSubproblemGradient(p, cfg, k, it, y)) <= 1e-9);
    }
  }
}

TEST_CASE("update_z examples") {
  slp::Problem p;
  p.A = slp::Matrix{{1, 1}};
  p.b = {0};
  p.l = {1, 1};
  p.r = 1;
  sa::SolverConfig cfg;

  // d + w/sigma = (-2, -3) is left alone.
  p.c = {2, 3};
  sa::Iterate it{{0}, {0, 0}, {0, 0}};
  auto zk = sa::BuildZKernel(p, cfg);
  CHECK(zk.uniform);
  CHECK(sa::UpdateZ(zk, p, cfg, V{0}, it) == V{-2, -3});

  // d + w/sigma = (3, -1, 1), r = 1.
  slp::Problem q;
  q.A = slp::Matrix{{1, 1, 1}};
  q.b = {0};
  q.c = {-3, 1, -1};
  q.l = {1, 1, 1};
  q.r = 1;
  it = {{0}, {0, 0, 0}, {0, 0, 0}};
  zk = sa::BuildZKernel(q, cfg);
  CHECK(sa::UpdateZ(zk, q, cfg, V{0}, it) == V{2, -1, 1});

  // l = (1, 2): Q = diag(0, 3), w~ = (1, 1/2), soft threshold at 1.
  slp::Problem g;
  g.A = slp::Matrix{{1, 1}};
  g.b = {0};
  g.c = {-1, -1};
  g.l = {1, 2};
  g.r = 2;
  it = {{0}, {0, 0}, {0, 0}};
  zk = sa::BuildZKernel(g, cfg);
  CHECK_FALSE(zk.uniform);
  CHECK(zk.lambda_eff == 1.0);
  CHECK(sa::UpdateZ(zk, g, cfg, V{0}, it) == V{0, 0});
}

TEST_CASE("update_z solves its subproblem") {
  TestRng rng(44);
  for (bool uniform : {true, false}) {
    for (int t = 0; t < 50; ++t) {
      const auto p = RandomProblem(rng, 3, 9, uniform);
      sa::SolverConfig cfg;
      cfg.sigma = rng.Uniform(0.2, 5.0);
      const auto zk = sa::BuildZKernel(p, cfg);
      const auto it = RandomIterate(rng, p);
      const V y = rng.Normals(p.m());
      V d = MatTVec(p.A, y);
      for (std::size_t j = 0; j < p.n(); ++j) d[j] -= p.c[j];
      const auto z = sa::UpdateZ(zk, p, cfg, y, it);
      const double best = ZSubproblemObjective(p, cfg, d, it, uniform, z);
      for (int k = 0; k < 200; ++k) {
        V zp = z;
        const double scale = k < 100 ? 1e-4 : 0.5;
        for (auto& v : zp) v += scale * rng.Normal();
        CHECK(best <= ZSubproblemObjective(p, cfg, d, it, uniform, zp) + 1e-12);
      }
    }
  }
}

TEST_CASE("update_w examples and identity") {
  slp::Problem p;
  p.A = slp::Matrix{{1, 1}};
  p.b = {0};
  p.c = {0, 0};
  p.l = {1, 1};
  p.r = 1;
  sa::SolverConfig cfg;
  cfg.tau = 1.0;
  cfg.sigma = 1.0;
  sa::Iterate it{{0}, {0, 0}, {0.25, -0.5}};
  CHECK(sa::UpdateW(cfg, V{0}, V{0, 0}, it, p) == it.w);
  // Residual A^T y - z - c = (1, -1) moves w along it.
  CHECK(sa::UpdateW(cfg, V{0}, V{-1, 1}, it, p) == V{1.25, -1.5});

  TestRng rng(45);
  for (int t = 0; t < 20; ++t) {
    const auto q = RandomProblem(rng, 4, 10, true);
    sa::SolverConfig c2;
    c2.sigma = rng.Uniform(0.5, 3.0);
    c2.tau = rng.Uniform(0.1, 1.6);
    const auto it2 = RandomIterate(rng, q);
    const V y = rng.Normals(q.m());
    const V z = rng.Normals(q.n());
    const auto w = sa::UpdateW(c2, y, z, it2, q);
    const V aty = MatTVec(q.A, y);
    for (std::size_t j = 0; j < q.n(); ++j)
      CHECK((w[j] - it2.w[j]) / (c2.tau * c2.sigma) ==
            doctest::Approx(aty[j] - z[j] - q.c[j]).epsilon(1e-10));
  }
}

TEST_CASE("residual examples") {
  const auto p = TwoBlockExample();
  // Optimal triple: y = 0, z = A^T y - c = e, c^T w = -2.
  sa::Iterate it{{0, 0}, {1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5}};
  auto res = sa::ComputeResiduals(p, it);
  CHECK(res.zeta == 0.0);
  CHECK(res.eta == 0.0);
  CHECK(res.theta == -2.0);

  it = {{0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  res = sa::ComputeResiduals(p, it);
  CHECK(res.zeta == doctest::Approx(2.0 / 3.0));

  TestRng rng(46);
  const auto q = RandomProblem(rng, 3, 7, true);
  const V y = rng.Normals(3);
  V z = MatTVec(q.A, y);
  for (std::size_t j = 0; j < q.n(); ++j) z[j] -= q.c[j];
  CHECK(sa::ComputeResiduals(q, {y, z, rng.Normals(7)}).zeta == 0.0);
}

TEST_CASE("initial iterate and config validation") {
  const auto it = sa::InitialIterate(TwoBlockExample());
  CHECK(it.y == V{0, 0});
  CHECK(it.z == V{1, 1, 1, 1});
  CHECK(it.w == V{0, 0, 0, 0});
  sa::SolverConfig cfg;
  CHECK_NOTHROW(sa::ValidateConfig(cfg));
  cfg.tau = 1.62;
  CHECK_THROWS_AS(sa::ValidateConfig(cfg), slp::Error);
  cfg = {};
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(sa::ValidateConfig(cfg), slp::Error);
  cfg = {};
  cfg.tol = -1.0;
  CHECK_THROWS_AS(sa::ValidateConfig(cfg), slp::Error);
  cfg = {};
  cfg.maxiter = 0;
  CHECK_THROWS_AS(sa::ValidateConfig(cfg), slp::Error);
}

TEST_CASE("solve_dual on the two-block instance") {
  const auto p = TwoBlockExample();
  std::vector<sa::TraceRecord> trace;
  const auto sol = sa::SolveDual(p, {}, [&](const sa::TraceRecord& r) { trace.push_back(r); });
  CHECK(sol.stats.status == sa::Status::kConverged);
  CHECK(sol.stats.theta_y == doctest::Approx(-2.0).epsilon(1e-6));
  V d = MatTVec(p.A, sol.iterate.y);
  for (std::size_t j = 0; j < 4; ++j) d[j] -= p.c[j];
  CHECK(MaxAbsDiff(d, V{1, 1, 1, 1}) <= 1e-4);
  CHECK(static_cast<int>(trace.size()) == sol.stats.iterations);
  CHECK(trace.back().iteration == sol.stats.iterations);
  CHECK(sol.stats.final_sigma == 1.0);
}

TEST_CASE("solve_dual on a planted instance") {
  slp::bench::GenSpec spec;
  spec.family = slp::bench::Family::kRandomPlanted;
  spec.n = 200;
  spec.m = 100;
  spec.r = 20;
  spec.seed = 7;
  const auto inst = slp::bench::GenRandomPlanted(spec);
  const auto sol = sa::SolveDual(inst.problem, {});
  CHECK(sol.stats.status == sa::Status::kConverged);
  CHECK(std::abs(slp::Dot(inst.problem.c, sol.iterate.w)) <= 1e-6);
  CHECK(std::abs(sol.stats.theta_y) <= 1e-6);
}

TEST_CASE("solve_dual reaches the convexified optimum on small instances") {
  TestRng rng(47);
  sa::SolverConfig cfg;
  cfg.maxiter = 50000;
  for (int t = 0; t < 20; ++t) {
    const int n = rng.Int(3, 8);
    const int m = rng.Int(1, std::min(4, n - 1));
    const auto p = slp::testing::RandomFeasibleProblem(rng, n, m, rng.Int(1, n));
    const double hull = ConvexifiedOptimum(p);
    const auto sol = sa::SolveDual(p, cfg);
    CHECK(sol.stats.status == sa::Status::kConverged);
    CHECK(std::abs(sol.stats.theta_y - hull) <= 1e-6 * (1.0 + std::abs(hull)));
    // The multiplier lands in the convexified primal set.
    CHECK(slp::oracle::CheckPhatPoint(p, sol.iterate.w, 1e-5).feasible);
    CHECK(slp::Dot(p.c, sol.iterate.w) == doctest::Approx(hull).epsilon(1e-5));
    // Never above the sparse optimum.
    CHECK(sol.stats.theta_y <= slp::oracle::EnumerateOptimal(p).optimum + 1e-8);
  }
}

TEST_CASE("solve_dual matches the enumerated optimum when the hull adds no vertices") {
  // One budget-tight row per block: conv C(l;r) meets Ax = b only at sparse points.
  TestRng rng(49);
  for (int t = 0; t < 20; ++t) {
    slp::Problem p;
    p.A = slp::Matrix{{1, -1, 0, 0, 0, 0}, {0, 0, 1, -1, 0, 0}, {0, 0, 0, 0, 1, -1}};
    p.b = {0, 0, 0};
    p.c = rng.Normals(6);
    p.l.assign(6, 1.0);
    p.r = 2;
    const auto opt = slp::oracle::EnumerateOptimal(p);
    const auto sol = sa::SolveDual(p, {});
    CHECK(sol.stats.status == sa::Status::kConverged);
    CHECK(std::abs(sol.stats.theta_y - ConvexifiedOptimum(p)) <= 1e-6);
    CHECK(sol.stats.theta_y <= opt.optimum + 1e-8);
  }
}

TEST_CASE("solve_dual is deterministic") {
  TestRng rng(48);
  const auto p = RandomProblem(rng, 6, 20, false);
  sa::SolverConfig cfg;
  cfg.maxiter = 300;
  std::vector<double> thetas_a, thetas_b;
  const auto a = sa::SolveDual(p, cfg, [&](const sa::TraceRecord& r) { thetas_a.push_back(r.theta); });
  const auto b = sa::SolveDual(p, cfg, [&](const sa::TraceRecord& r) { thetas_b.push_back(r.theta); });
  CHECK(BitEqual(a.iterate.y, b.iterate.y));
  CHECK(BitEqual(a.iterate.z, b.iterate.z));
  CHECK(BitEqual(a.iterate.w, b.iterate.w));
  CHECK(BitEqual(thetas_a, thetas_b));
}

TEST_CASE("adaptive sigma still converges") {
  sa::SolverConfig cfg;
  cfg.adaptive_sigma = true;
  const auto sol = sa::SolveDual(TwoBlockExample(), cfg);
  CHECK(sol.stats.status == sa::Status::kConverged);
  CHECK(sol.stats.theta_y == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(sol.stats.final_sigma > 0.0);
}

TEST_CASE("trace csv format") {
  CHECK(sa::TraceCsvHeader() == "iteration,zeta,eta,theta");
  const auto line = sa::FormatTraceCsv({3, 0.5, 0.25, -2.0});
  CHECK(line.rfind("3,", 0) == 0);
  CHECK(std::count(line.begin(), line.end(), ',') == 3);
}
