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

#include "slp/dual_primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slp/kernels.hpp"
#include "slp/sparse_proj.hpp"

namespace slp::dual_primal {

namespace {

constexpr double kRecoveryFeasTol = 1e-6;

std::vector<double> Weighted(const Problem& p, std::span<const double> z) {
  std::vector<double> v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = p.l[i] * z[i];
  return v;
}

IndexSet Head(const std::vector<std::size_t>& order, int r) {
  return IndexSet(std::vector<std::size_t>(order.begin(), order.begin() + r));
}

}  // namespace

std::string_view ToString(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::kSparseMultiplier: return "SparseMultiplier";
    case CertificateKind::kZeroSolution: return "ZeroSolution";
    case CertificateKind::kIndexSetCaseA: return "IndexSetCaseA";
    case CertificateKind::kIndexSetCaseB: return "IndexSetCaseB";
    case CertificateKind::kIndexSetCaseC: return "IndexSetCaseC";
    case CertificateKind::kUncertified: return "Uncertified";
  }
  return "Unknown";
}

double DefaultCertifyTol(const Problem& p, std::span<const double> z_star) {
  return 1e-6 * (1.0 + NormInf(Weighted(p, z_star)));
}

IndexSet TopWeightedSupport(const Problem& p, std::span<const double> z) {
  return Head(sparse_proj::SortedOrder(Weighted(p, z)), p.r);
}

Certificate Certify(const Problem& p, std::span<const double> z, double tol) {
  const std::size_t n = p.n();
  if (z.size() != n) throw Error(ErrorCode::kDimensionMismatch, "z* has wrong length");
  const auto r = static_cast<std::size_t>(p.r);
  const auto lz = Weighted(p, z);
  const auto t = sparse_proj::SortedOrder(lz);

  Certificate cert;
  if (std::all_of(z.begin(), z.end(), [&](double v) { return v < -tol; })) {
    cert.kind = CertificateKind::kZeroSolution;
    cert.detail = "z* < 0 componentwise";
    return cert;
  }
  const std::size_t positives =
      static_cast<std::size_t>(std::count_if(z.begin(), z.end(), [&](double v) { return v > tol; }));
  if (positives == r) {
    cert.kind = CertificateKind::kIndexSetCaseA;
    cert.detail = "exactly r positive entries";
  } else if (positives > r && r < n && lz[t[r - 1]] > lz[t[r]] + tol) {
    cert.kind = CertificateKind::kIndexSetCaseB;
    cert.detail = "strict gap between positions r and r+1 of l∘z*";
  } else if (positives > 0 && positives < r && (r == n || z[t[r]] < -tol)) {
    cert.kind = CertificateKind::kIndexSetCaseC;
    cert.detail = "fewer than r positives and z* negative at position r+1";
  } else {
    cert.kind = CertificateKind::kUncertified;
    if (positives > r) {
      cert.detail = "tie in l∘z* across position r";
    } else if (positives == 0) {
      cert.detail = "no positive entry but z* not strictly negative";
    } else {
      cert.detail = "z* not strictly negative at position r+1";
    }
    return cert;
  }
  cert.index_set = Head(t, p.r);
  return cert;
}

RestrictedResult RestrictedLp(const Problem& p, const IndexSet& support) {
  if (support.empty()) throw Error(ErrorCode::kInvalidArgument, "support must be nonempty");
  support.CheckInRange(p.n());
  const std::size_t k = support.size();
  Matrix sub(p.m(), k);
  std::vector<double> cs(k), us(k);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t j = support[t];
    for (std::size_t i = 0; i < p.m(); ++i) sub(i, t) = p.A(i, j);
    cs[t] = p.c[j];
    us[t] = p.l[j];
  }
  const auto lp = oracle::SimplexBoxLp(sub, p.b, cs, us);
  RestrictedResult out;
  out.status = lp.status;
  if (lp.status != oracle::LpStatus::kOptimal) return out;
  out.x.assign(p.n(), 0.0);
  for (std::size_t t = 0; t < k; ++t) out.x[support[t]] = lp.x[t];
  out.value = Dot(p.c, out.x);
  return out;
}

Solution Solve(const Problem& p, const spadmm::SolverConfig& config,
               const spadmm::TraceSink& trace) {
  auto dual = spadmm::SolveDual(p, config, trace);
  Solution sol;
  sol.dual_stats = dual.stats;
  sol.dual_iterate = std::move(dual.iterate);
  const auto& y = sol.dual_iterate.y;
  const auto& w = sol.dual_iterate.w;
  const bool converged = sol.dual_stats.status == spadmm::Status::kConverged;

  sol.z_star.resize(p.n());
  kernels::GemvT(p.A, y, sol.z_star);
  for (std::size_t j = 0; j < p.n(); ++j) sol.z_star[j] -= p.c[j];
  sol.dual_objective = spadmm::DualObjectiveFromShift(p, y, sol.z_star);

  // A sparse multiplier solving the convexified primal is optimal outright.
  const double w_tol = 1e-6 * (1.0 + NormInf(w));
  if (converged && CountSupport(w, w_tol) <= static_cast<std::size_t>(p.r)) {
    std::vector<double> x(p.n(), 0.0);
    for (std::size_t j = 0; j < p.n(); ++j)
      if (w[j] > w_tol) x[j] = std::min(w[j], p.l[j]);
    if (IsFeasible(p, x, kRecoveryFeasTol)) {
      sol.status = RecoveryStatus::kRecovered;
      sol.objective = Dot(p.c, x);
      sol.x = std::move(x);
      sol.certificate.kind = CertificateKind::kSparseMultiplier;
      sol.certificate.detail = "multiplier has at most r nonzeros";
      return sol;
    }
  }

  sol.certificate = Certify(p, sol.z_star, DefaultCertifyTol(p, sol.z_star));
  if (!converged && sol.certificate.kind != CertificateKind::kUncertified) {
    sol.certificate = {CertificateKind::kUncertified, {}, "dual solve did not converge"};
  }
  const auto support = TopWeightedSupport(p, sol.z_star);
  auto lp = RestrictedLp(p, support);
  if (lp.status != oracle::LpStatus::kOptimal) {
    sol.status = RecoveryStatus::kRestrictedInfeasible;
    sol.x.assign(p.n(), 0.0);
    sol.objective = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  sol.status = RecoveryStatus::kRecovered;
  sol.x = std::move(lp.x);
  sol.objective = lp.value;
  return sol;
}

}  // namespace slp::dual_primal
