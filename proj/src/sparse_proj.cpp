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

#include "slp/sparse_proj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace slp::sparse_proj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckSparsity(int r, std::size_t n) {
  if (r < 1 || static_cast<std::size_t>(r) > n) {
    throw Error(ErrorCode::kSparsityOutOfRange,
                "r=" + std::to_string(r) + " not in [1, " + std::to_string(n) + "]");
  }
}

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(ErrorCode::kDimensionMismatch, what);
}

}  // namespace

std::vector<std::size_t> SortedOrder(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return order;
}

SortedSplit SplitSorted(std::span<const double> w) {
  SortedSplit s;
  s.perm = SortedOrder(w);
  for (std::size_t idx : s.perm) {
    if (w[idx] >= 0.0) {
      s.w_plus.push_back(w[idx]);
    } else {
      s.w_minus.push_back(w[idx]);
    }
  }
  return s;
}

SparseProjection ProjectSparseNonneg(std::span<const double> z, int r) {
  CheckSparsity(r, z.size());
  const auto order = SortedOrder(z);
  SparseProjection out;
  out.pi.assign(z.size(), 0.0);
  for (std::size_t k = 0; k < static_cast<std::size_t>(r); ++k) {
    const std::size_t i = order[k];
    out.pi[i] = std::max(z[i], 0.0);
    out.l1 += out.pi[i];
  }
  return out;
}

double TopRPlusSum(std::span<const double> z, int r) {
  CheckSparsity(r, z.size());
  std::vector<double> pos;
  pos.reserve(z.size());
  for (double v : z)
    if (v > 0.0) pos.push_back(v);
  const auto k = static_cast<std::size_t>(r);
  if (pos.size() > k) {
    std::nth_element(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k - 1), pos.end(),
                     std::greater<>());
    pos.resize(k);
  }
  return std::accumulate(pos.begin(), pos.end(), 0.0);
}

double ClosedFormBoxMin(std::span<const double> p, std::span<const double> l,
                        const IndexSet& support) {
  CheckSameLength(p.size(), l.size(), "p and l lengths differ");
  support.CheckInRange(p.size());
  double s = 0.0;
  for (std::size_t i : support) s += std::max(-l[i] * p[i], 0.0);
  return -s;
}

double SparseBoxMin(std::span<const double> p, std::span<const double> l, int r) {
  CheckSameLength(p.size(), l.size(), "p and l lengths differ");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = -l[i] * p[i];
  return -TopRPlusSum(v, r);
}

bool KyFanSubdiffContains(std::span<const double> z, std::span<const double> mu, int r,
                          double tol) {
  const std::size_t n = z.size();
  CheckSparsity(r, n);
  CheckSameLength(mu.size(), n, "mu and z lengths differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] < 0.0) throw Error(ErrorCode::kInvalidArgument, "z must be nonnegative");
    if (i + 1 < n && z[i + 1] > z[i]) throw Error(ErrorCode::kNotSorted, "z not non-increasing");
  }
  const double zr = z[static_cast<std::size_t>(r - 1)];
  std::size_t r0 = 0;  // entries strictly above the plateau
  std::size_t r1 = 0;  // entries down to the end of the plateau
  for (std::size_t i = 0; i < n; ++i) {
    if (z[i] > zr + tol) ++r0;
    if (z[i] >= zr - tol) ++r1;
  }
  const auto rr = static_cast<std::size_t>(r);
  for (std::size_t i = 0; i < r0; ++i)
    if (std::abs(mu[i] - 1.0) > tol) return false;

  double plateau_sum = 0.0;
  if (zr > tol) {
    for (std::size_t i = r0; i < r1; ++i) {
      if (mu[i] < -tol || mu[i] > 1.0 + tol) return false;
      plateau_sum += mu[i];
    }
    for (std::size_t i = r1; i < n; ++i)
      if (std::abs(mu[i]) > tol) return false;
    const double budget = static_cast<double>(rr - r0);
    return std::abs(plateau_sum - budget) <= tol * static_cast<double>(std::max<std::size_t>(1, r1 - r0));
  }
  for (std::size_t i = r0; i < n; ++i) {
    if (mu[i] < -tol || mu[i] > 1.0 + tol) return false;
    plateau_sum += mu[i];
  }
  return plateau_sum <= static_cast<double>(rr - r0) +
                            tol * static_cast<double>(std::max<std::size_t>(1, n - r0));
}

namespace {

// 1-based view of w_plus with the two guard entries.
struct Guarded {
  std::span<const double> w;
  double operator()(int i) const {
    if (i <= 0) return kInf;
    if (static_cast<std::size_t>(i) > w.size()) return 0.0;
    return w[static_cast<std::size_t>(i - 1)];
  }
};

struct Candidate {
  SearchCase kind;
  int r0;
  int r1;
  double theta;
  double violation;
};

// Violation measures ignore strictness; they only rank fallback candidates.
double ZeroCaseViolation(const Guarded& W, const std::vector<double>& s, int n1, int r, int r0,
                         double lambda) {
  const double tail = (s[static_cast<std::size_t>(n1)] - s[static_cast<std::size_t>(r0)]) /
                      static_cast<double>(r - r0);
  return std::max({0.0, lambda - W(r0), W(r0 + 1) - lambda, tail - lambda});
}

double PlateauTheta(const std::vector<double>& s, int r, int r0, int r1, double lambda) {
  return (s[static_cast<std::size_t>(r1)] - s[static_cast<std::size_t>(r0)] -
          lambda * static_cast<double>(r - r0)) /
         static_cast<double>(r1 - r0);
}

double PlateauViolation(const Guarded& W, double theta, int r0, int r1, double lambda) {
  return std::max({0.0, lambda + theta - W(r0), W(r0 + 1) - lambda - theta, theta - W(r1),
                   W(r1 + 1) - theta});
}

bool ZeroCaseHolds(const Guarded& W, const std::vector<double>& s, int n1, int r, int r0,
                   double lambda) {
  return W(r0) > lambda && lambda >= W(r0 + 1) &&
         lambda >= (s[static_cast<std::size_t>(n1)] - s[static_cast<std::size_t>(r0)]) /
                       static_cast<double>(r - r0);
}

bool PlateauHolds(const Guarded& W, double theta, int r0, int r1, double lambda) {
  return W(r0) > lambda + theta && lambda + theta >= W(r0 + 1) && W(r1) >= theta &&
         theta > W(r1 + 1);
}

// For fixed r0 the plateau end r1 is the first position k >= r with
//   g(k) = (s_k - s_r0) - (k - r0) * w_{k+1} > lambda (r - r0),
// g being non-decreasing in k. Returns n1 + 1 when there is none.
int PlateauEnd(const Guarded& W, const std::vector<double>& s, int n1, int r, int r0,
               double lambda) {
  const double budget = lambda * static_cast<double>(r - r0);
  auto g = [&](int k) {
    return (s[static_cast<std::size_t>(k)] - s[static_cast<std::size_t>(r0)]) -
           static_cast<double>(k - r0) * W(k + 1);
  };
  int lo = r;
  int hi = n1 + 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (g(mid) > budget) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

void Assemble(const Guarded& W, int n1, const Candidate& cand, double lambda,
              std::vector<double>& z) {
  z.assign(static_cast<std::size_t>(n1), 0.0);
  for (int i = 1; i <= cand.r0; ++i) z[static_cast<std::size_t>(i - 1)] = W(i) - lambda;
  if (cand.kind == SearchCase::kPlateauAtR) {
    for (int i = cand.r0 + 1; i <= cand.r1; ++i) z[static_cast<std::size_t>(i - 1)] = cand.theta;
    for (int i = cand.r1 + 1; i <= n1; ++i) z[static_cast<std::size_t>(i - 1)] = W(i);
  }
}

}  // namespace

SearchResult SearchingDetailed(double lambda, std::span<const double> w_plus, int r) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive and finite");
  }
  const int n1 = static_cast<int>(w_plus.size());
  CheckSparsity(r, w_plus.size());
  for (std::size_t i = 0; i < w_plus.size(); ++i) {
    if (!(w_plus[i] >= 0.0) || (i > 0 && w_plus[i] > w_plus[i - 1])) {
      throw Error(ErrorCode::kNonMonotoneInput, "w_plus must be nonnegative and non-increasing");
    }
  }

  const Guarded W{w_plus};
  SearchResult out;
  std::vector<double>& s = out.state.prefix;
  s.resize(static_cast<std::size_t>(n1) + 1);
  s[0] = 0.0;
  for (int j = 1; j <= n1; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + W(j);

  auto finish = [&](const Candidate& cand, bool exact) {
    out.state.r0 = cand.r0;
    out.state.r1 = cand.r1;
    out.state.theta = cand.theta;
    out.state.kind = cand.kind;
    out.state.exact = exact;
    Assemble(W, n1, cand, lambda, out.z);
    return out;
  };

  // z_r = 0: r0 scans downward from r - 1.
  for (int r0 = r - 1; r0 >= 0; --r0) {
    if (ZeroCaseHolds(W, s, n1, r, r0, lambda)) {
      return finish({SearchCase::kZeroAtR, r0, n1, 0.0, 0.0}, true);
    }
  }

  // z_r > 0: r0 scans downward from r - 1; for each r0 the plateau end is
  // located on the monotone crossing and its neighbours are tried too.
  Candidate best{SearchCase::kZeroAtR, 0, n1, 0.0, kInf};
  for (int r0 = r - 1; r0 >= 0; --r0) {
    const double v = ZeroCaseViolation(W, s, n1, r, r0, lambda);
    if (v < best.violation) best = {SearchCase::kZeroAtR, r0, n1, 0.0, v};
  }
  for (int r0 = r - 1; r0 >= 0; --r0) {
    const int k = std::min(PlateauEnd(W, s, n1, r, r0, lambda), n1);
    for (int r1 : {k, k - 1, k + 1}) {
      if (r1 < r || r1 > n1) continue;
      const double theta = PlateauTheta(s, r, r0, r1, lambda);
      if (PlateauHolds(W, theta, r0, r1, lambda)) {
        return finish({SearchCase::kPlateauAtR, r0, r1, theta, 0.0}, true);
      }
      const double v = PlateauViolation(W, theta, r0, r1, lambda);
      if (v < best.violation) best = {SearchCase::kPlateauAtR, r0, r1, theta, v};
    }
  }
  return finish(best, false);
}

std::vector<double> Searching(double lambda, std::span<const double> w_plus, int r) {
  return SearchingDetailed(lambda, w_plus, r).z;
}

std::vector<double> ProxSparseL1(std::span<const double> w, double lambda, int r) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive and finite");
  }
  CheckSparsity(r, w.size());
  std::vector<double> z(w.begin(), w.end());
  // Negative entries are fixed points; only the nonnegative part is sorted.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] >= 0.0) order.push_back(i);
  const std::size_t n1 = order.size();
  if (n1 == 0) return z;

  if (static_cast<std::size_t>(r) >= n1) {
    // The penalty is lambda * sum([z]_+): one-sided soft threshold.
    for (std::size_t i : order) z[i] = std::max(w[i] - lambda, 0.0);
    return z;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  std::vector<double> w_plus(n1);
  for (std::size_t k = 0; k < n1; ++k) w_plus[k] = w[order[k]];
  const auto z_bar = Searching(lambda, w_plus, r);
  for (std::size_t k = 0; k < n1; ++k) z[order[k]] = z_bar[k];
  return z;
}

double ProxObjective(std::span<const double> z, std::span<const double> w, double lambda,
                     int r) {
  CheckSameLength(z.size(), w.size(), "z and w lengths differ");
  double q = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) q += (z[i] - w[i]) * (z[i] - w[i]);
  return 0.5 * q + lambda * TopRPlusSum(z, r);
}

}  // namespace slp::sparse_proj
