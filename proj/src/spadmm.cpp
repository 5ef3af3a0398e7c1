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

#include "slp/spadmm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "slp/kernels.hpp"
#include "slp/sparse_proj.hpp"

namespace slp::spadmm {

namespace {

const double kGoldenRatio = (1.0 + std::sqrt(5.0)) / 2.0;

void CheckIterate(const Problem& p, const Iterate& it) {
  if (it.y.size() != p.m() || it.z.size() != p.n() || it.w.size() != p.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "iterate does not match problem");
  }
}

double PowerIterationLambdaMax(const Matrix& G, std::uint64_t seed) {
  const std::size_t m = G.rows();
  std::mt19937_64 gen(seed);
  std::vector<double> v(m), u(m);
  for (double& vi : v) vi = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  double nv = Norm2(v);
  if (nv == 0.0) {
    v.assign(m, 1.0);
    nv = Norm2(v);
  }
  for (double& vi : v) vi /= nv;

  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    kernels::Gemv(G, v, u);
    const double rq = Dot(v, u);
    const double nu = Norm2(u);
    if (nu == 0.0) break;
    for (std::size_t i = 0; i < m; ++i) v[i] = u[i] / nu;
    const bool done = std::abs(rq - lambda) <= 1e-12 * std::abs(rq);
    lambda = std::max(lambda, rq);
    if (done) break;
  }
  // Power iteration approaches lambda_max from below; pad it slightly and cap
  // with the Gershgorin bound, which is never below lambda_max.
  double gersh = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (double g : G.row(i)) s += std::abs(g);
    gersh = std::max(gersh, s);
  }
  return std::min(lambda * (1.0 + 1e-9), gersh);
}

// rhs = A(sigma z + sigma c - w) + b
std::vector<double> YRightHandSide(const Problem& p, const SolverConfig& cfg, const Iterate& it) {
  std::vector<double> v(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) v[j] = cfg.sigma * (it.z[j] + p.c[j]) - it.w[j];
  std::vector<double> rhs(p.m());
  kernels::Gemv(p.A, v, rhs);
  for (std::size_t i = 0; i < p.m(); ++i) rhs[i] += p.b[i];
  return rhs;
}

std::vector<double> UpdateYWithShift(const YUpdateKernel& kernel, const Problem& p,
                                     const SolverConfig& cfg, const Iterate& it,
                                     std::span<const double> aty_k) {
  auto rhs = YRightHandSide(p, cfg, it);
  if (kernel.mode == YUpdateKernel::Mode::kFactorized) {
    kernels::CholeskySolve(kernel.chol, rhs);
    for (double& v : rhs) v /= cfg.sigma;
    return rhs;
  }
  // sigma P y_k = sigma (lambda_max y_k - A (A^T y_k))
  std::vector<double> aaty(p.m());
  kernels::Gemv(p.A, aty_k, aaty);
  const double denom = cfg.sigma * kernel.lambda_max;
  for (std::size_t i = 0; i < p.m(); ++i) {
    rhs[i] += cfg.sigma * (kernel.lambda_max * it.y[i] - aaty[i]);
    rhs[i] /= denom;
  }
  return rhs;
}

}  // namespace

void ValidateConfig(const SolverConfig& cfg) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  }
  if (!(cfg.tau > 0.0 && cfg.tau < kGoldenRatio)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must lie in (0, (1+sqrt(5))/2)");
  }
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  if (cfg.maxiter < 1) throw Error(ErrorCode::kInvalidArgument, "maxiter must be >= 1");
}

std::string_view ToString(Status status) {
  return status == Status::kConverged ? "Converged" : "MaxIterReached";
}

Iterate InitialIterate(const Problem& p) {
  Iterate it;
  it.y.assign(p.m(), 0.0);
  it.z.resize(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) it.z[j] = -p.c[j];
  it.w.assign(p.n(), 0.0);
  return it;
}

std::string TraceCsvHeader() { return "iteration,zeta,eta,theta"; }

std::string FormatTraceCsv(const TraceRecord& rec) {
  return std::to_string(rec.iteration) + "," + FormatReal(rec.zeta) + "," + FormatReal(rec.eta) +
         "," + FormatReal(rec.theta);
}

double DualObjectiveFromShift(const Problem& p, std::span<const double> y,
                              std::span<const double> aty_minus_c) {
  std::vector<double> v(p.n());
  for (std::size_t j = 0; j < p.n(); ++j) v[j] = p.l[j] * aty_minus_c[j];
  return Dot(p.b, y) - sparse_proj::TopRPlusSum(v, p.r);
}

double EvalDualObjective(const Problem& p, std::span<const double> y) {
  if (y.size() != p.m()) throw Error(ErrorCode::kDimensionMismatch, "y has wrong length");
  std::vector<double> d(p.n());
  kernels::GemvT(p.A, y, d);
  for (std::size_t j = 0; j < p.n(); ++j) d[j] -= p.c[j];
  return DualObjectiveFromShift(p, y, d);
}

YUpdateKernel BuildYKernel(const Problem& p, const SolverConfig& cfg) {
  Matrix G = kernels::Gram(p.A);
  double trace = 0.0;
  for (std::size_t i = 0; i < G.rows(); ++i) trace += G(i, i);
  if (!(trace > 0.0)) throw Error(ErrorCode::kDegenerateMatrix, "A A^T is zero");

  YUpdateKernel k;
  if (cfg.y_mode != YMode::kSpectral) {
    Matrix L = G;
    const double pivot_tol = 1e-12 * trace / static_cast<double>(G.rows());
    if (kernels::Cholesky(L, pivot_tol)) {
      k.mode = YUpdateKernel::Mode::kFactorized;
      k.chol = std::move(L);
      return k;
    }
    if (cfg.y_mode == YMode::kFactorize) {
      throw Error(ErrorCode::kDegenerateMatrix, "A A^T is numerically singular");
    }
  }
  k.mode = YUpdateKernel::Mode::kSpectral;
  k.lambda_max = PowerIterationLambdaMax(G, cfg.rng_seed);
  return k;
}

ZUpdateKernel BuildZKernel(const Problem& p, const SolverConfig& cfg) {
  ZUpdateKernel k;
  k.l_diag = p.l;
  k.l_min = *std::min_element(p.l.begin(), p.l.end());
  k.uniform = std::all_of(p.l.begin(), p.l.end(), [&](double v) { return v == p.l[0]; });
  if (k.uniform) {
    k.l0 = p.l[0];
    k.lambda_eff = k.l0 / cfg.sigma;
  } else {
    k.lambda_eff = k.l_min * k.l_min / cfg.sigma;
  }
  return k;
}

std::vector<double> UpdateY(const YUpdateKernel& kernel, const Problem& p,
                            const SolverConfig& cfg, const Iterate& it) {
  CheckIterate(p, it);
  std::vector<double> aty(p.n(), 0.0);
  if (kernel.mode == YUpdateKernel::Mode::kSpectral) kernels::GemvT(p.A, it.y, aty);
  return UpdateYWithShift(kernel, p, cfg, it, aty);
}

std::vector<double> UpdateZFromShift(const ZUpdateKernel& kernel, const Problem& p,
                                     const SolverConfig& cfg, std::span<const double> d,
                                     const Iterate& it) {
  const std::size_t n = p.n();
  std::vector<double> v(n);
  if (kernel.uniform) {
    for (std::size_t j = 0; j < n; ++j) v[j] = d[j] + it.w[j] / cfg.sigma;
    return sparse_proj::ProxSparseL1(v, kernel.lambda_eff, p.r);
  }
  // Substituting u = L z turns the Q-regularized subproblem into a prox of
  // TopRPlusSum at l_min^2 * w~ with weight l_min^2 / sigma.
  const double lmin2 = kernel.l_min * kernel.l_min;
  for (std::size_t j = 0; j < n; ++j) {
    const double lj = kernel.l_diag[j];
    const double q = lj * lj / lmin2 - 1.0;
    const double w_tilde = (d[j] + q * it.z[j] + it.w[j] / cfg.sigma) / lj;
    v[j] = lmin2 * w_tilde;
  }
  auto u = sparse_proj::ProxSparseL1(v, kernel.lambda_eff, p.r);
  for (std::size_t j = 0; j < n; ++j) u[j] /= kernel.l_diag[j];
  return u;
}

std::vector<double> UpdateZ(const ZUpdateKernel& kernel, const Problem& p,
                            const SolverConfig& cfg, std::span<const double> y_next,
                            const Iterate& it) {
  CheckIterate(p, it);
  std::vector<double> d(p.n());
  kernels::GemvT(p.A, y_next, d);
  for (std::size_t j = 0; j < p.n(); ++j) d[j] -= p.c[j];
  return UpdateZFromShift(kernel, p, cfg, d, it);
}

std::vector<double> UpdateW(const SolverConfig& cfg, std::span<const double> y_next,
                            std::span<const double> z_next, const Iterate& it,
                            const Problem& p) {
  CheckIterate(p, it);
  std::vector<double> aty(p.n());
  kernels::GemvT(p.A, y_next, aty);
  std::vector<double> w(it.w);
  const double step = cfg.tau * cfg.sigma;
  for (std::size_t j = 0; j < p.n(); ++j) w[j] += step * (aty[j] - z_next[j] - p.c[j]);
  return w;
}

namespace {

Residuals ResidualsFromShift(const Problem& p, const Iterate& it, std::span<const double> d,
                             double c_norm) {
  Residuals res;
  double r2 = 0.0;
  for (std::size_t j = 0; j < p.n(); ++j) {
    const double rj = d[j] - it.z[j];
    r2 += rj * rj;
  }
  res.zeta = std::sqrt(r2) / (1.0 + c_norm);
  res.theta = DualObjectiveFromShift(p, it.y, d);
  const double ctw = Dot(p.c, it.w);
  res.eta = std::abs(ctw - res.theta) / std::max({1.0, std::abs(ctw), std::abs(res.theta)});
  return res;
}

}  // namespace

namespace {

// Residual balancing schedule. The change count is capped so that sigma is
// eventually fixed.
constexpr int kAdaptPeriod = 10;
constexpr int kMaxAdaptations = 50;
constexpr double kBalance = 10.0;
constexpr double kSigmaStep = 2.0;

}  // namespace

Residuals ComputeResiduals(const Problem& p, const Iterate& it) {
  CheckIterate(p, it);
  std::vector<double> d(p.n());
  kernels::GemvT(p.A, it.y, d);
  for (std::size_t j = 0; j < p.n(); ++j) d[j] -= p.c[j];
  return ResidualsFromShift(p, it, d, Norm2(p.c));
}

DualSolution SolveDual(const Problem& p, const SolverConfig& cfg, const TraceSink& trace) {
  EnsureValid(p);
  ValidateConfig(cfg);
  const YUpdateKernel ykernel = BuildYKernel(p, cfg);
  const ZUpdateKernel zkernel = BuildZKernel(p, cfg);
  const std::size_t n = p.n();
  const double c_norm = Norm2(p.c);
  SolverConfig run = cfg;  // sigma may move under residual balancing
  ZUpdateKernel zk = zkernel;
  int adaptations = 0;
  std::vector<double> z_prev;
  std::vector<double> dz_img(p.m());

  DualSolution out;
  Iterate& it = out.iterate;
  it = InitialIterate(p);
  out.stats.y_mode = ykernel.mode;
  std::vector<double> aty(n, 0.0);  // A^T y for the current y
  std::vector<double> d(n);

  for (int k = 1; k <= cfg.maxiter; ++k) {
    it.y = UpdateYWithShift(ykernel, p, run, it, aty);
    kernels::GemvT(p.A, it.y, aty);
    for (std::size_t j = 0; j < n; ++j) d[j] = aty[j] - p.c[j];
    const bool adapt = cfg.adaptive_sigma && k % kAdaptPeriod == 0 &&
                       adaptations < kMaxAdaptations;
    if (adapt) z_prev = it.z;
    it.z = UpdateZFromShift(zk, p, run, d, it);
    const double step = run.tau * run.sigma;
    for (std::size_t j = 0; j < n; ++j) it.w[j] += step * (d[j] - it.z[j]);

    if (adapt) {
      // Primal residual of the splitting vs. the dual residual sigma A (z+ - z).
      double rp2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double rj = d[j] - it.z[j];
        rp2 += rj * rj;
        z_prev[j] = it.z[j] - z_prev[j];
      }
      kernels::Gemv(p.A, z_prev, dz_img);
      const double rp = std::sqrt(rp2);
      const double rd = run.sigma * Norm2(dz_img);
      double factor = 1.0;
      if (rp > kBalance * rd) factor = kSigmaStep;
      if (rd > kBalance * rp) factor = 1.0 / kSigmaStep;
      if (factor != 1.0) {
        run.sigma *= factor;
        zk.lambda_eff /= factor;
        ++adaptations;
      }
    }

    const Residuals res = ResidualsFromShift(p, it, d, c_norm);
    out.stats.iterations = k;
    out.stats.zeta = res.zeta;
    out.stats.eta = res.eta;
    out.stats.theta_y = res.theta;
    out.stats.final_sigma = run.sigma;
    if (trace) trace({k, res.zeta, res.eta, res.theta});
    if (res.zeta < cfg.tol && res.eta < cfg.tol) {
      out.stats.status = Status::kConverged;
      break;
    }
  }
  return out;
}

}  // namespace slp::spadmm
