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

// Dual-primal recovery: solve the dual with sPADMM, then either accept a
// sparse multiplier directly or pick the r largest entries of l∘z*
// (z* = A^T y* - c) as a support and solve the LP restricted to it.
//
// Optimal index set certificates, with t the order of l∘z* (non-increasing,
// ties by index) and p = #{i : z*_i > 0}:
//   z* < 0                               -> 0 is optimal
//   p == r                               -> {t_1..t_r} optimal
//   p > r and l z*_{t_r} > l z*_{t_{r+1}}  -> {t_1..t_r} optimal
//   0 < p < r and z*_{t_{r+1}} < 0         -> {t_1..t_r} optimal
// Anything else (typically ties across position r) is left uncertified.

#ifndef SLP_DUAL_PRIMAL_HPP_
#define SLP_DUAL_PRIMAL_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slp/core.hpp"
#include "slp/oracle.hpp"
#include "slp/spadmm.hpp"

namespace slp::dual_primal {

enum class CertificateKind {
  kSparseMultiplier,
  kZeroSolution,
  kIndexSetCaseA,
  kIndexSetCaseB,
  kIndexSetCaseC,
  kUncertified,
};

std::string_view ToString(CertificateKind kind);

struct Certificate {
  CertificateKind kind = CertificateKind::kUncertified;
  IndexSet index_set;  // r entries for the three index-set cases, else empty
  std::string detail;
};

// Margin for the strict inequalities: 1e-6 * (1 + ||l∘z*||_inf).
double DefaultCertifyTol(const Problem& problem, std::span<const double> z_star);

Certificate Certify(const Problem& problem, std::span<const double> z_star, double tol);

// Indices of the r largest entries of l∘z (ties by ascending index).
IndexSet TopWeightedSupport(const Problem& problem, std::span<const double> z);

struct RestrictedResult {
  oracle::LpStatus status = oracle::LpStatus::kInfeasible;
  std::vector<double> x;  // length n, zero off the support
  double value = 0.0;
};

// min c^T x over {Ax = b, 0 <= x <= l, supp(x) ⊆ support}.
RestrictedResult RestrictedLp(const Problem& problem, const IndexSet& support);

enum class RecoveryStatus { kRecovered, kRestrictedInfeasible };

struct Solution {
  RecoveryStatus status = RecoveryStatus::kRestrictedInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  Certificate certificate;
  spadmm::SolveStats dual_stats;
  double dual_objective = 0.0;
  spadmm::Iterate dual_iterate;
  std::vector<double> z_star;  // A^T y* - c
};

Solution Solve(const Problem& problem, const spadmm::SolverConfig& config,
               const spadmm::TraceSink& trace = {});

}  // namespace slp::dual_primal

#endif  // SLP_DUAL_PRIMAL_HPP_
