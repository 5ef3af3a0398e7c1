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

// Ground-truth machinery that shares no code path with the ADMM solver:
// a bounded-variable primal simplex, exhaustive support enumeration, a
// Moreau-identity prox for the Ky-Fan norm, and a checker for points of the
// convexified primal.

#ifndef SLP_ORACLE_HPP_
#define SLP_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slp/core.hpp"

namespace slp::oracle {

enum class LpStatus { kOptimal, kInfeasible };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double value = 0.0;
  // Multipliers of Ax = b from the final basis and the matching dual value
  //   b^T y - sum_j u_j [A_j^T y - c_j]_+,
  // which equals `value` at an optimal basis.
  std::vector<double> y;
  double dual_bound = 0.0;
  int iterations = 0;
};

// min c^T x  s.t.  A x = b, 0 <= x <= u   (u > 0 componentwise).
// Two-phase dense tableau simplex with Bland's rule and bound flipping.
LpResult SimplexBoxLp(const Matrix& A, std::span<const double> b, std::span<const double> c,
                      std::span<const double> u);

inline constexpr std::size_t kMaxEnumerationN = 25;

struct EnumResult {
  bool feasible = false;
  double optimum = 0.0;
  std::vector<std::vector<double>> minimizers;
  std::vector<IndexSet> optimal_index_sets;
};

// Solves the restricted LP on every support of size r and keeps the best.
// Throws kTooLarge when n > kMaxEnumerationN.
EnumResult EnumerateOptimal(const Problem& problem);

// Euclidean projection onto {mu : |mu_i| <= lambda, sum |mu_i| <= lambda r},
// the lambda-scaled unit ball of the dual norm of ||.||_(r).
std::vector<double> ProjectDualBall(std::span<const double> w, double lambda, int r);

// prox of lambda * ||.||_(r) through the Moreau identity: w - ProjectDualBall(w).
std::vector<double> ProxOracleKyFan(std::span<const double> w, double lambda, int r);

// Residuals of w against {Aw = b, 0 <= w <= l, sum_i w_i / l_i <= r}.
struct PhatReport {
  double equality_residual = 0.0;  // ||Aw - b||_2
  double lower_violation = 0.0;    // max(0, -min w)
  double upper_violation = 0.0;    // max(0, max(w - l))
  double budget = 0.0;             // sum_i w_i / l_i
  double budget_violation = 0.0;   // max(0, budget - r)
  // Violation of the single-budget form sum_i w_i / l_i <= 1, which only
  // describes the hull when r = 1; reported so the two can be compared.
  double unit_budget_violation = 0.0;
  double objective = 0.0;
  bool feasible = false;
  std::vector<std::string> violated;
};

PhatReport CheckPhatPoint(const Problem& problem, std::span<const double> w, double tol);

}  // namespace slp::oracle

#endif  // SLP_ORACLE_HPP_
