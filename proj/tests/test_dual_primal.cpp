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
#include <map>
#include <vector>

#include "doctest.h"
#include "slp/bench.hpp"
#include "slp/dual_primal.hpp"
#include "slp/oracle.hpp"
#include "test_support.hpp"

namespace dp = slp::dual_primal;
using dp::CertificateKind;
using slp::testing::MaxAbsDiff;
using slp::testing::TestRng;
using slp::testing::TwoBlockExample;
using V = std::vector<double>;

namespace {

slp::Problem UnitBoxProblem(std::size_t n, int r) {
  slp::Problem p;
  p.A = slp::Matrix(1, n, 1.0);
  p.b = {0};
  p.c.assign(n, 0.0);
  p.l.assign(n, 1.0);
  p.r = r;
  return p;
}

dp::Certificate CertifyDefault(const slp::Problem& p, const V& z) {
  return dp::Certify(p, z, dp::DefaultCertifyTol(p, z));
}

}  // namespace

TEST_CASE("certify examples") {
  auto c = CertifyDefault(TwoBlockExample(), V{1, 1, 1, 1});
  CHECK(c.kind == CertificateKind::kUncertified);
  CHECK(c.index_set.empty());

  c = CertifyDefault(UnitBoxProblem(2, 1), V{-1, -2});
  CHECK(c.kind == CertificateKind::kZeroSolution);

  c = CertifyDefault(UnitBoxProblem(4, 2), V{3, 2, 1, -1});
  CHECK(c.kind == CertificateKind::kIndexSetCaseB);
  CHECK(c.index_set == slp::IndexSet{0, 1});

  c = CertifyDefault(UnitBoxProblem(3, 2), V{2, 1, -1});
  CHECK(c.kind == CertificateKind::kIndexSetCaseA);
  CHECK(c.index_set == slp::IndexSet{0, 1});

  c = CertifyDefault(UnitBoxProblem(4, 3), V{-2, 2, 1, -1});
  CHECK(c.kind == CertificateKind::kIndexSetCaseC);
  CHECK(c.index_set == slp::IndexSet{1, 2, 3});

  // Tie straddling position r.
  c = CertifyDefault(UnitBoxProblem(4, 2), V{3, 1, 1, 0.5});
  CHECK(c.kind == CertificateKind::kUncertified);
  // p < r but z_{t_{r+1}} = 0.
  c = CertifyDefault(UnitBoxProblem(4, 3), V{2, 1, 0, 0});
  CHECK(c.kind == CertificateKind::kUncertified);
  CHECK_FALSE(c.detail.empty());
}

TEST_CASE("certify orders by l-weighted values") {
  auto p = UnitBoxProblem(3, 1);
  p.l = {1, 4, 1};
  // z favours index 0, l∘z favours index 1.
  const auto c = CertifyDefault(p, V{3, 1, 0.5});
  CHECK(c.kind == CertificateKind::kIndexSetCaseB);
  CHECK(c.index_set == slp::IndexSet{1});
  CHECK(dp::TopWeightedSupport(p, V{3, 1, 0.5}) == slp::IndexSet{1});
}

TEST_CASE("certify is invariant under positive scaling") {
  TestRng rng(51);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(rng.Int(2, 9));
    auto p = UnitBoxProblem(n, rng.Int(1, static_cast<int>(n)));
    p.l = rng.Uniforms(n, 0.5, 2.0);
    V z(n);
    for (auto& v : z) v = 0.5 * rng.Int(-3, 3);  // ties on purpose
    const double alpha = rng.Uniform(0.01, 100.0);
    V az = z;
    for (auto& v : az) v *= alpha;
    const double tol = dp::DefaultCertifyTol(p, z);
    const auto a = dp::Certify(p, z, tol);
    const auto b = dp::Certify(p, az, alpha * tol);
    CHECK(a.kind == b.kind);
    CHECK(a.index_set == b.index_set);
  }
}

TEST_CASE("restricted lp examples") {
  const auto p = TwoBlockExample();
  auto res = dp::RestrictedLp(p, slp::IndexSet{0, 1});
  REQUIRE(res.status == slp::oracle::LpStatus::kOptimal);
  CHECK(res.value == doctest::Approx(-2.0));
  CHECK(MaxAbsDiff(res.x, V{1, 1, 0, 0}) < 1e-12);

  res = dp::RestrictedLp(p, slp::IndexSet{0, 2});
  REQUIRE(res.status == slp::oracle::LpStatus::kOptimal);
  CHECK(res.value == 0.0);
  CHECK(res.x == V{0, 0, 0, 0});

  auto q = p;
  q.b = {1, 0};
  res = dp::RestrictedLp(q, slp::IndexSet{2});
  CHECK(res.status == slp::oracle::LpStatus::kInfeasible);
  CHECK_THROWS_AS(dp::RestrictedLp(p, slp::IndexSet{}), slp::Error);
  CHECK_THROWS_AS(dp::RestrictedLp(p, slp::IndexSet{4}), slp::Error);
}

TEST_CASE("solve on the two-block instance") {
  const auto sol = dp::Solve(TwoBlockExample(), {});
  REQUIRE(sol.status == dp::RecoveryStatus::kRecovered);
  CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(sol.certificate.kind == CertificateKind::kUncertified);
  CHECK(MaxAbsDiff(sol.x, V{1, 1, 0, 0}) <= 1e-9);
  CHECK(slp::IsFeasible(TwoBlockExample(), sol.x, 1e-6));
}

TEST_CASE("solve on a planted instance") {
  slp::bench::GenSpec spec;
  spec.family = slp::bench::Family::kRandomPlanted;
  spec.n = 200;
  spec.m = 100;
  spec.r = 20;
  spec.seed = 3;
  const auto inst = slp::bench::GenRandomPlanted(spec);
  const auto sol = dp::Solve(inst.problem, {});
  REQUIRE(sol.status == dp::RecoveryStatus::kRecovered);
  CHECK(std::abs(sol.objective) <= 1e-6);
  V diff(sol.x.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = sol.x[j] - inst.xopt[j];
  CHECK(slp::Norm2(diff) / slp::Norm2(sol.x) < 1e-2);
  CHECK(slp::IsFeasible(inst.problem, sol.x, 1e-6));
}

TEST_CASE("certified solutions match enumeration on small instances") {
  TestRng rng(52);
  slp::spadmm::SolverConfig cfg;
  cfg.maxiter = 50000;
  std::map<CertificateKind, int> kinds;
  for (int t = 0; t < 80; ++t) {
    const int n = rng.Int(3, 9);
    const int m = rng.Int(1, std::min(4, n - 1));
    const auto p = slp::testing::RandomFeasibleProblem(rng, n, m, rng.Int(1, n));
    const auto opt = slp::oracle::EnumerateOptimal(p);
    REQUIRE(opt.feasible);
    const auto sol = dp::Solve(p, cfg);
    ++kinds[sol.certificate.kind];
    if (sol.status == dp::RecoveryStatus::kRestrictedInfeasible) continue;
    CHECK(slp::IsFeasible(p, sol.x, 1e-6));
    CHECK(sol.objective >= opt.optimum - 1e-6);
    if (sol.certificate.kind != CertificateKind::kUncertified) {
      INFO("certificate " << ToString(sol.certificate.kind) << " trial " << t);
      CHECK(std::abs(sol.objective - opt.optimum) <= 1e-6);
    }
  }
  MESSAGE("certificate mix over 80 instances: certified "
          << 80 - kinds[CertificateKind::kUncertified] << ", uncertified "
          << kinds[CertificateKind::kUncertified]);
}

TEST_CASE("solve is deterministic") {
  TestRng rng(53);
  const auto p = slp::testing::RandomFeasibleProblem(rng, 30, 10, 6);
  slp::spadmm::SolverConfig cfg;
  cfg.maxiter = 500;
  const auto a = dp::Solve(p, cfg);
  const auto b = dp::Solve(p, cfg);
  CHECK(a.x.size() == b.x.size());
  CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
  CHECK(a.dual_objective == b.dual_objective);
  CHECK(a.certificate.kind == b.certificate.kind);
  CHECK(a.dual_stats.iterations == b.dual_stats.iterations);
}

TEST_CASE("certificate kind names") {
  CHECK(dp::ToString(CertificateKind::kSparseMultiplier) == "SparseMultiplier");
  CHECK(dp::ToString(CertificateKind::kUncertified) == "Uncertified");
}
