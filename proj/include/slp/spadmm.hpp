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

// Semi-proximal ADMM for the Lagrangian dual of the sparse LP, written as
//
//   min  -b^T y + ||Proj_{S(r) ∩ R^n_+}(l∘z)||_1   s.t.  A^T y - z = c,
//
// with augmented Lagrangian
//
//   L_sigma(y, z; w) = -b^T y + h(z) + w^T (A^T y - z - c)
//                      + sigma/2 ||A^T y - z - c||^2.
//
// One iteration:
//   y+ = argmin L_sigma(y, z; w) + sigma/2 ||y - y_k||_P^2
//   z+ = argmin L_sigma(y+, z; w) + sigma/2 ||z - z_k||_Q^2
//   w+ = w + tau sigma (A^T y+ - z+ - c)
//
// P = 0 when A A^T has a usable Cholesky factor, otherwise
// P = lambda_max(AA^T) I - AA^T. Q = 0 when l is uniform, otherwise
// Q = L^2 / l_min^2 - I with L = Diag(l). The multiplier w converges to a
// solution of the convexified primal min{c^T w : Aw = b, w in conv C(l;r)}.

#ifndef SLP_SPADMM_HPP_
#define SLP_SPADMM_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slp/core.hpp"

namespace slp::spadmm {

enum class YMode { kAuto, kFactorize, kSpectral };

struct SolverConfig {
  double sigma = 1.0;
  double tau = 1.618;
  double tol = 1e-8;
  int maxiter = 5000;
  YMode y_mode = YMode::kAuto;
  std::uint64_t rng_seed = 0;  // start vector of the power iteration
  // Residual balancing on sigma: every 10 iterations, double or halve sigma
  // when one residual exceeds the other tenfold; at most 50 changes.
  bool adaptive_sigma = false;
};

// Throws kInvalidArgument on sigma <= 0, tau outside (0, (1+sqrt5)/2),
// tol <= 0 or maxiter < 1.
void ValidateConfig(const SolverConfig& config);

struct Iterate {
  std::vector<double> y;  // length m
  std::vector<double> z;  // length n
  std::vector<double> w;  // length n
};

// (y, z, w) = (0, -c, 0); the constraint A^T y - z = c holds exactly.
Iterate InitialIterate(const Problem& problem);

struct YUpdateKernel {
  enum class Mode { kFactorized, kSpectral };
  Mode mode = Mode::kFactorized;
  Matrix chol;             // lower factor of AA^T (factorized)
  double lambda_max = 0.0; // largest eigenvalue estimate of AA^T (spectral)
};

struct ZUpdateKernel {
  bool uniform = true;     // l == l0 * e bit-for-bit
  double l0 = 0.0;
  double l_min = 0.0;
  std::vector<double> l_diag;
  double lambda_eff = 0.0; // l0/sigma or l_min^2/sigma
};

enum class Status { kConverged, kMaxIterReached };

std::string_view ToString(Status status);

struct SolveStats {
  int iterations = 0;
  double zeta = 0.0;     // ||A^T y - z - c|| / (1 + ||c||)
  double eta = 0.0;      // |c^T w - theta(y)| / max{1, |c^T w|, |theta(y)|}
  double theta_y = 0.0;  // dual objective at the final y
  double final_sigma = 0.0;
  Status status = Status::kMaxIterReached;
  YUpdateKernel::Mode y_mode = YUpdateKernel::Mode::kFactorized;
};

struct TraceRecord {
  int iteration = 0;
  double zeta = 0.0;
  double eta = 0.0;
  double theta = 0.0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// "iteration,zeta,eta,theta" with 17 significant digits.
std::string TraceCsvHeader();
std::string FormatTraceCsv(const TraceRecord& record);

// theta(y) = b^T y - TopRPlusSum(l∘(A^T y - c), r).
double EvalDualObjective(const Problem& problem, std::span<const double> y);

// Dual value when A^T y - c is already at hand.
double DualObjectiveFromShift(const Problem& problem, std::span<const double> y,
                              std::span<const double> aty_minus_c);

YUpdateKernel BuildYKernel(const Problem& problem, const SolverConfig& config);
ZUpdateKernel BuildZKernel(const Problem& problem, const SolverConfig& config);

// Solves sigma (AA^T + P) y = A(sigma z + sigma c - w) + b + sigma P y_k.
std::vector<double> UpdateY(const YUpdateKernel& kernel, const Problem& problem,
                            const SolverConfig& config, const Iterate& iterate);

std::vector<double> UpdateZ(const ZUpdateKernel& kernel, const Problem& problem,
                            const SolverConfig& config, std::span<const double> y_next,
                            const Iterate& iterate);
// Same, given d = A^T y_next - c.
std::vector<double> UpdateZFromShift(const ZUpdateKernel& kernel, const Problem& problem,
                                     const SolverConfig& config,
                                     std::span<const double> aty_minus_c, const Iterate& iterate);

std::vector<double> UpdateW(const SolverConfig& config, std::span<const double> y_next,
                            std::span<const double> z_next, const Iterate& iterate,
                            const Problem& problem);

struct Residuals {
  double zeta = 0.0;
  double eta = 0.0;
  double theta = 0.0;
};

Residuals ComputeResiduals(const Problem& problem, const Iterate& iterate);

struct DualSolution {
  Iterate iterate;
  SolveStats stats;
};

DualSolution SolveDual(const Problem& problem, const SolverConfig& config,
                       const TraceSink& trace = {});

}  // namespace slp::spadmm

#endif  // SLP_SPADMM_HPP_
