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

#include "slp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace slp::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper };

// Solves M x = rhs by Gaussian elimination with partial pivoting. M is
// consumed. Returns nullopt when M is numerically singular.
std::optional<std::vector<double>> DenseSolve(Matrix M, std::vector<double> rhs) {
  const std::size_t k = M.rows();
  double scale = 0.0;
  for (double v : M.data()) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-13 * std::max(1.0, scale);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < k; ++i)
      if (std::abs(M(i, col)) > std::abs(M(piv, col))) piv = i;
    if (std::abs(M(piv, col)) <= tiny) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(M(piv, j), M(col, j));
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t i = col + 1; i < k; ++i) {
      const double f = M(i, col) / M(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < k; ++j) M(i, j) -= f * M(col, j);
      rhs[i] -= f * rhs[col];
    }
  }
  for (std::size_t ii = k; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= M(ii, j) * rhs[j];
    rhs[ii] = s / M(ii, ii);
  }
  return rhs;
}

class BoundedSimplex {
 public:
  BoundedSimplex(const Matrix& A, std::span<const double> b, std::span<const double> u)
      : m_(A.rows()), n_(A.cols()), total_(A.cols() + A.rows()),
        tab_(m_, total_), beta_(m_), sign_(m_, 1.0), upper_(total_, kInf),
        state_(total_, VarState::kAtLower), enterable_(total_, true), basis_(m_) {
    double amax = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) {
        tab_(i, j) = sign_[i] * A(i, j);
        amax = std::max(amax, std::abs(A(i, j)));
      }
      tab_(i, n_ + i) = 1.0;
      beta_[i] = sign_[i] * b[i];
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
    }
    for (std::size_t j = 0; j < n_; ++j) upper_[j] = u[j];
    piv_tol_ = 1e-9 * std::max(1.0, amax);
    max_iter_ = 100 * static_cast<int>(total_ + m_) + 10000;
  }

  // Minimizes cost^T x from the current basis. Returns false if the guard
  // on the iteration count trips.
  bool Run(const std::vector<double>& cost, double opt_tol) {
    std::vector<double> d(cost);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < total_; ++j) d[j] -= cb * tab_(i, j);
    }
    for (;;) {
      if (iterations_ >= max_iter_) return false;
      std::size_t q = total_;
      for (std::size_t j = 0; j < total_; ++j) {
        if (!enterable_[j] || state_[j] == VarState::kBasic) continue;
        if ((state_[j] == VarState::kAtLower && d[j] < -opt_tol) ||
            (state_[j] == VarState::kAtUpper && d[j] > opt_tol)) {
          q = j;
          break;
        }
      }
      if (q == total_) return true;
      ++iterations_;

      const double dir = state_[q] == VarState::kAtLower ? 1.0 : -1.0;
      std::size_t p = m_;
      double best = kInf;
      bool leave_at_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = dir * tab_(i, q);
        double ratio;
        bool to_upper;
        if (a > piv_tol_) {
          ratio = beta_[i] / a;
          to_upper = false;
        } else if (a < -piv_tol_ && std::isfinite(upper_[basis_[i]])) {
          ratio = (upper_[basis_[i]] - beta_[i]) / (-a);
          to_upper = true;
        } else {
          continue;
        }
        ratio = std::max(ratio, 0.0);
        if (ratio < best || (ratio == best && p < m_ && basis_[i] < basis_[p])) {
          best = ratio;
          p = i;
          leave_at_upper = to_upper;
        }
      }

      const double flip = upper_[q];
      if (std::isfinite(flip) && flip <= best) {
        for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * tab_(i, q) * flip;
        state_[q] = state_[q] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
        continue;
      }
      if (p == m_) {
        throw Error(ErrorCode::kInvalidArgument, "unbounded direction in a box-bounded LP");
      }

      const double start = state_[q] == VarState::kAtLower ? 0.0 : upper_[q];
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * tab_(i, q) * best;
      beta_[p] = start + dir * best;

      const std::size_t leaving = basis_[p];
      Pivot(p, q, d);
      state_[leaving] = leave_at_upper ? VarState::kAtUpper : VarState::kAtLower;
      if (leaving >= n_) enterable_[leaving] = false;
      basis_[p] = q;
      state_[q] = VarState::kBasic;
    }
  }

  double ArtificialSum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) s += std::max(beta_[i], 0.0);
    return s;
  }

  void FixArtificials() {
    for (std::size_t j = n_; j < total_; ++j) {
      upper_[j] = 0.0;
      enterable_[j] = false;
    }
  }

  // Structural values, with the basic part recomputed from the original
  // columns to shed accumulated tableau error.
  std::vector<double> Primal(const Matrix& A, std::span<const double> b) const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      if (state_[j] == VarState::kAtUpper) x[j] = upper_[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = beta_[i];

    Matrix B(m_, m_);
    std::vector<double> rhs(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      rhs[i] = sign_[i] * b[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (state_[j] == VarState::kAtUpper) rhs[i] -= sign_[i] * A(i, j) * upper_[j];
      for (std::size_t k = 0; k < m_; ++k) B(i, k) = Column(A, basis_[k], i);
    }
    if (auto xb = DenseSolve(std::move(B), std::move(rhs))) {
      for (std::size_t k = 0; k < m_; ++k)
        if (basis_[k] < n_) x[basis_[k]] = (*xb)[k];
    }
    for (std::size_t j = 0; j < n_; ++j) x[j] = std::clamp(x[j], 0.0, upper_[j]);
    return x;
  }

  // Multipliers y with B^T y = c_B, mapped back to the unsigned rows.
  std::optional<std::vector<double>> Duals(const Matrix& A, std::span<const double> c) const {
    Matrix Bt(m_, m_);
    std::vector<double> cb(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      cb[k] = basis_[k] < n_ ? c[basis_[k]] : 0.0;
      for (std::size_t i = 0; i < m_; ++i) Bt(k, i) = Column(A, basis_[k], i);
    }
    auto y = DenseSolve(std::move(Bt), std::move(cb));
    if (!y) return std::nullopt;
    for (std::size_t i = 0; i < m_; ++i) (*y)[i] *= sign_[i];
    return y;
  }

  int iterations() const { return iterations_; }

 private:
  double Column(const Matrix& A, std::size_t var, std::size_t row) const {
    if (var < n_) return sign_[row] * A(row, var);
    return var - n_ == row ? 1.0 : 0.0;
  }

  void Pivot(std::size_t p, std::size_t q, std::vector<double>& d) {
    const double piv = tab_(p, q);
    auto prow = tab_.row(p);
    for (double& v : prow) v /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == p) continue;
      const double f = tab_(i, q);
      if (f == 0.0) continue;
      auto row = tab_.row(i);
      for (std::size_t j = 0; j < total_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double fq = d[q];
    if (fq != 0.0)
      for (std::size_t j = 0; j < total_; ++j) d[j] -= fq * prow[j];
    d[q] = 0.0;
  }

  std::size_t m_, n_, total_;
  Matrix tab_;
  std::vector<double> beta_;
  std::vector<double> sign_;
  std::vector<double> upper_;
  std::vector<VarState> state_;
  std::vector<bool> enterable_;
  std::vector<std::size_t> basis_;
  double piv_tol_ = 1e-9;
  int max_iter_ = 0;
  int iterations_ = 0;
};

}  // namespace

LpResult SimplexBoxLp(const Matrix& A, std::span<const double> b, std::span<const double> c,
                      std::span<const double> u) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (b.size() != m || c.size() != n || u.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "SimplexBoxLp operand sizes");
  }
  for (double v : u)
    if (!(v > 0.0)) throw Error(ErrorCode::kNonPositiveBound, "upper bounds must be positive");

  LpResult out;
  BoundedSimplex lp(A, b, u);

  std::vector<double> phase1(n + m, 0.0);
  std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
  if (!lp.Run(phase1, 1e-11)) throw Error(ErrorCode::kCycleDetected, "phase 1 iteration guard");
  const double bscale = std::max(1.0, NormInf(b));
  if (lp.ArtificialSum() > 1e-9 * bscale) {
    out.status = LpStatus::kInfeasible;
    out.iterations = lp.iterations();
    return out;
  }

  lp.FixArtificials();
  std::vector<double> phase2(n + m, 0.0);
  std::copy(c.begin(), c.end(), phase2.begin());
  if (!lp.Run(phase2, 1e-10 * std::max(1.0, NormInf(c)))) {
    throw Error(ErrorCode::kCycleDetected, "phase 2 iteration guard");
  }

  out.status = LpStatus::kOptimal;
  out.iterations = lp.iterations();
  out.x = lp.Primal(A, b);
  out.value = Dot(c, out.x);
  if (auto y = lp.Duals(A, c)) {
    out.y = std::move(*y);
    double bound = Dot(b, out.y);
    for (std::size_t j = 0; j < n; ++j) {
      double aty = 0.0;
      for (std::size_t i = 0; i < m; ++i) aty += A(i, j) * out.y[i];
      bound -= u[j] * std::max(aty - c[j], 0.0);
    }
    out.dual_bound = bound;
  } else {
    out.dual_bound = out.value;
  }
  return out;
}

namespace {

std::vector<std::uint32_t> Combinations(std::size_t n, std::size_t r) {
  std::vector<std::uint32_t> out;
  std::vector<std::size_t> idx(r);
  for (std::size_t k = 0; k < r; ++k) idx[k] = k;
  for (;;) {
    std::uint32_t mask = 0;
    for (std::size_t k : idx) mask |= std::uint32_t{1} << k;
    out.push_back(mask);
    std::size_t k = r;
    while (k > 0 && idx[k - 1] == n - r + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t t = k; t < r; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

std::vector<std::size_t> MaskIndices(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j)
    if (mask & (std::uint32_t{1} << j)) idx.push_back(j);
  return idx;
}

LpResult SolveOnSupport(const Problem& p, const std::vector<std::size_t>& cols) {
  Matrix sub(p.m(), cols.size());
  std::vector<double> cs(cols.size()), us(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (std::size_t i = 0; i < p.m(); ++i) sub(i, k) = p.A(i, cols[k]);
    cs[k] = p.c[cols[k]];
    us[k] = p.l[cols[k]];
  }
  return SimplexBoxLp(sub, p.b, cs, us);
}

}  // namespace

EnumResult EnumerateOptimal(const Problem& problem) {
  EnsureValid(problem);
  const std::size_t n = problem.n();
  if (n > kMaxEnumerationN) {
    throw Error(ErrorCode::kTooLarge, "enumeration refuses n=" + std::to_string(n) + " > " +
                                          std::to_string(kMaxEnumerationN));
  }
  const auto masks = Combinations(n, static_cast<std::size_t>(problem.r));
  std::vector<double> values(masks.size(), kInf);

  const auto count = static_cast<std::ptrdiff_t>(masks.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto res = SolveOnSupport(problem, MaskIndices(masks[static_cast<std::size_t>(k)], n));
    if (res.status == LpStatus::kOptimal) values[static_cast<std::size_t>(k)] = res.value;
  }

  EnumResult out;
  const double best = *std::min_element(values.begin(), values.end());
  if (!std::isfinite(best)) return out;
  out.feasible = true;
  out.optimum = best;

  // Lexicographic mask order makes the collection deterministic.
  const double tie = 1e-9 * std::max(1.0, std::abs(best));
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (values[k] > best + tie) continue;
    const auto cols = MaskIndices(masks[k], n);
    out.optimal_index_sets.emplace_back(cols);
    const auto res = SolveOnSupport(problem, cols);
    std::vector<double> x(n, 0.0);
    for (std::size_t t = 0; t < cols.size(); ++t) x[cols[t]] = res.x[t];
    const bool seen = std::any_of(out.minimizers.begin(), out.minimizers.end(), [&](const auto& y) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - y[i]));
      return d <= 1e-9;
    });
    if (!seen) out.minimizers.push_back(std::move(x));
  }
  return out;
}

std::vector<double> ProjectDualBall(std::span<const double> w, double lambda, int r) {
  const std::size_t n = w.size();
  if (r < 1 || static_cast<std::size_t>(r) > n) {
    throw Error(ErrorCode::kSparsityOutOfRange, "r not in [1, n]");
  }
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::abs(w[i]);
  const double budget = lambda * r;
  // Mass after shifting by nu >= 0 and clipping to [0, lambda].
  auto mass = [&](double nu) {
    double s = 0.0;
    for (double vi : v) s += std::clamp(vi - nu, 0.0, lambda);
    return s;
  };

  double nu = 0.0;
  if (mass(0.0) > budget) {
    std::vector<double> knots{0.0};
    for (double vi : v) {
      knots.push_back(vi);
      if (vi > lambda) knots.push_back(vi - lambda);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    // mass is continuous, non-increasing and linear between knots.
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double a = knots[k];
      const double b = knots[k + 1];
      const double fa = mass(a);
      const double fb = mass(b);
      if (fb <= budget) {
        nu = fa == fb ? a : a + (fa - budget) * (b - a) / (fa - fb);
        break;
      }
    }
  }

  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::clamp(v[i] - nu, 0.0, lambda);
    mu[i] = w[i] < 0.0 ? -mag : mag;
  }
  return mu;
}

std::vector<double> ProxOracleKyFan(std::span<const double> w, double lambda, int r) {
  auto mu = ProjectDualBall(w, lambda, r);
  for (std::size_t i = 0; i < w.size(); ++i) mu[i] = w[i] - mu[i];
  return mu;
}

PhatReport CheckPhatPoint(const Problem& problem, std::span<const double> w, double tol) {
  if (w.size() != problem.n()) throw Error(ErrorCode::kDimensionMismatch, "w has wrong length");
  PhatReport rep;
  double res2 = 0.0;
  for (std::size_t i = 0; i < problem.m(); ++i) {
    const double ri = Dot(problem.A.row(i), w) - problem.b[i];
    res2 += ri * ri;
  }
  rep.equality_residual = std::sqrt(res2);
  for (std::size_t j = 0; j < w.size(); ++j) {
    rep.lower_violation = std::max(rep.lower_violation, -w[j]);
    rep.upper_violation = std::max(rep.upper_violation, w[j] - problem.l[j]);
    rep.budget += w[j] / problem.l[j];
  }
  rep.budget_violation = std::max(0.0, rep.budget - problem.r);
  rep.unit_budget_violation = std::max(0.0, rep.budget - 1.0);
  rep.objective = Dot(problem.c, w);

  if (rep.equality_residual > tol) rep.violated.emplace_back("equality");
  if (rep.lower_violation > tol) rep.violated.emplace_back("lower_bound");
  if (rep.upper_violation > tol) rep.violated.emplace_back("upper_bound");
  if (rep.budget_violation > tol) rep.violated.emplace_back("budget");
  rep.feasible = rep.violated.empty();
  return rep;
}

}  // namespace slp::oracle
