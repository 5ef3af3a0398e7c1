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

// Sparse nonnegative projections and the proximal mapping of
//
//   phi(z) = lambda * || Proj_{S(r) ∩ R^n_+}(z) ||_1
//          = lambda * (sum of the r largest entries of [z]_+),
//
// which on the nonnegative orthant is the vector Ky-Fan r-norm ||z||_(r).
//
// Conventions: "sorted" always means non-increasing with ties broken by
// ascending original index, so every result here is deterministic.

#ifndef SLP_SPARSE_PROJ_HPP_
#define SLP_SPARSE_PROJ_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "slp/core.hpp"

namespace slp::sparse_proj {

struct SparseProjection {
  std::vector<double> pi;  // projection onto S(r) ∩ R^n_+
  double l1 = 0.0;         // ||pi||_1, identical for every valid tie-break
};

// Keeps [z]_+ on the r largest entries of z and zeroes the rest.
SparseProjection ProjectSparseNonneg(std::span<const double> z, int r);

// Sum of the r largest entries of [z]_+.
double TopRPlusSum(std::span<const double> z, int r);

// min { p^T x : 0 <= x <= l, supp(x) ⊆ I } = -sum_{i in I} [-l_i p_i]_+.
double ClosedFormBoxMin(std::span<const double> p, std::span<const double> l,
                        const IndexSet& support);

// min { p^T x : 0 <= x <= l, ||x||_0 <= r } = -TopRPlusSum(-l∘p, r).
double SparseBoxMin(std::span<const double> p, std::span<const double> l, int r);

// Membership test for the subdifferential of the Ky-Fan r-norm at a sorted
// nonnegative z. Entries within `tol` of z_r are treated as part of the
// plateau around position r.
bool KyFanSubdiffContains(std::span<const double> z, std::span<const double> mu, int r,
                          double tol);

// Permutation sorting v non-increasingly, ties by ascending index.
std::vector<std::size_t> SortedOrder(std::span<const double> v);

struct SortedSplit {
  std::vector<std::size_t> perm;  // sorted position -> original index
  std::vector<double> w_plus;     // sorted entries >= 0
  std::vector<double> w_minus;    // sorted entries < 0
};

SortedSplit SplitSorted(std::span<const double> w);

enum class SearchCase {
  kZeroAtR,    // optimal z has z_r = 0
  kPlateauAtR  // optimal z has z_r = theta > 0
};

// Bookkeeping of the prox search on w_plus (positions are 1-based, as in the
// KKT description: position 0 carries +inf, position n1+1 carries 0).
struct SearchState {
  std::vector<double> prefix;  // prefix[j] = w_plus_1 + ... + w_plus_j
  int r0 = 0;                  // last position with z_i = w_i - lambda
  int r1 = 0;                  // last position of the plateau
  double theta = 0.0;          // plateau value
  SearchCase kind = SearchCase::kZeroAtR;
  // False when no candidate passed the exact interval tests and the one with
  // the smallest violation was taken instead (only reachable through
  // rounding at a breakpoint).
  bool exact = true;
};

struct SearchResult {
  std::vector<double> z;
  SearchState state;
};

// Prox of lambda*||.||_(r) at a sorted nonnegative w_plus, 1 <= r <= n1.
SearchResult SearchingDetailed(double lambda, std::span<const double> w_plus, int r);
std::vector<double> Searching(double lambda, std::span<const double> w_plus, int r);

// argmin_z 1/2||z - w||^2 + lambda * ||Proj_{S(r) ∩ R^n_+}(z)||_1.
std::vector<double> ProxSparseL1(std::span<const double> w, double lambda, int r);

// The objective minimized by ProxSparseL1.
double ProxObjective(std::span<const double> z, std::span<const double> w, double lambda,
                     int r);

}  // namespace slp::sparse_proj

#endif  // SLP_SPARSE_PROJ_HPP_
