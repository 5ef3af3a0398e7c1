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

#include "slp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace slp::kernels {

namespace {

// Column block width for A^T y; each block is owned by one thread.
constexpr std::ptrdiff_t kColBlock = 256;

// Below this many multiply-adds the parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1 << 14;

void CheckGemv(const Matrix& A, std::size_t x_len, std::size_t y_len) {
  if (x_len != A.cols() || y_len != A.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "Gemv operand sizes");
  }
}

inline double RowDot(const Matrix& A, std::size_t i, std::span<const double> x) {
  const double* a = A.row(i).data();
  double s = 0.0;
  for (std::size_t j = 0; j < A.cols(); ++j) s += a[j] * x[j];
  return s;
}

inline void AccumulateColumns(const Matrix& A, std::span<const double> y, std::span<double> x,
                              std::size_t j0, std::size_t j1) {
  std::fill(x.begin() + j0, x.begin() + j1, 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double yi = y[i];
    const double* a = A.row(i).data();
    for (std::size_t j = j0; j < j1; ++j) x[j] += a[j] * yi;
  }
}

inline double GramEntry(const Matrix& A, std::size_t i, std::size_t k) {
  const double* a = A.row(i).data();
  const double* b = A.row(k).data();
  double s = 0.0;
  for (std::size_t j = 0; j < A.cols(); ++j) s += a[j] * b[j];
  return s;
}

// Left-looking column step: entries below the diagonal of column j from the
// already finished columns 0..j-1.
inline double CholeskyOffDiag(const Matrix& G, std::size_t i, std::size_t j, double djj) {
  double s = G(i, j);
  for (std::size_t k = 0; k < j; ++k) s -= G(i, k) * G(j, k);
  return s / djj;
}

inline double CholeskyPivot(const Matrix& G, std::size_t j) {
  double s = G(j, j);
  for (std::size_t k = 0; k < j; ++k) s -= G(j, k) * G(j, k);
  return s;
}

void CheckSquare(const Matrix& G) {
  if (G.rows() != G.cols()) throw Error(ErrorCode::kDimensionMismatch, "Cholesky of non-square");
}

}  // namespace

void Gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  CheckGemv(A, x.size(), y.size());
  const auto m = static_cast<std::ptrdiff_t>(A.rows());
  const bool par = A.rows() * A.cols() >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] = RowDot(A, static_cast<std::size_t>(i), x);
}

void GemvT(const Matrix& A, std::span<const double> y, std::span<double> x) {
  CheckGemv(A, x.size(), y.size());
  const auto n = static_cast<std::ptrdiff_t>(A.cols());
  const std::ptrdiff_t blocks = (n + kColBlock - 1) / kColBlock;
  const bool par = A.rows() * A.cols() >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
    const auto j0 = static_cast<std::size_t>(blk * kColBlock);
    const auto j1 = static_cast<std::size_t>(std::min(n, (blk + 1) * kColBlock));
    AccumulateColumns(A, y, x, j0, j1);
  }
}

Matrix Gram(const Matrix& A) {
  const std::size_t m = A.rows();
  Matrix G(m, m);
  const auto mm = static_cast<std::ptrdiff_t>(m);
  const bool par = m * m * A.cols() >= kParallelWork;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t k = 0; k <= i; ++k) G(i, k) = GramEntry(A, i, k);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) G(i, k) = G(k, i);
  return G;
}

bool Cholesky(Matrix& G, double pivot_tol) {
  CheckSquare(G);
  const std::size_t m = G.rows();
  for (std::size_t j = 0; j < m; ++j) {
    const double pivot = CholeskyPivot(G, j);
    if (!(pivot > pivot_tol)) return false;
    const double djj = std::sqrt(pivot);
    G(j, j) = djj;
    const auto rest = static_cast<std::ptrdiff_t>(m - j - 1);
    const bool par = static_cast<std::size_t>(rest) * j >= kParallelWork;
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t t = 0; t < rest; ++t) {
      const std::size_t i = j + 1 + static_cast<std::size_t>(t);
      G(i, j) = CholeskyOffDiag(G, i, j, djj);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) G(i, k) = 0.0;
  return true;
}

void CholeskySolve(const Matrix& L, std::span<double> rhs) {
  const std::size_t m = L.rows();
  for (std::size_t i = 0; i < m; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * rhs[k];
    rhs[i] = s / L(i, i);
  }
  for (std::size_t ii = m; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t k = ii + 1; k < m; ++k) s -= L(k, ii) * rhs[k];
    rhs[ii] = s / L(ii, ii);
  }
}

namespace serial {

void Gemv(const Matrix& A, std::span<const double> x, std::span<double> y) {
  CheckGemv(A, x.size(), y.size());
  for (std::size_t i = 0; i < A.rows(); ++i) y[i] = RowDot(A, i, x);
}

void GemvT(const Matrix& A, std::span<const double> y, std::span<double> x) {
  CheckGemv(A, x.size(), y.size());
  AccumulateColumns(A, y, x, 0, A.cols());
}

Matrix Gram(const Matrix& A) {
  const std::size_t m = A.rows();
  Matrix G(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= i; ++k) G(i, k) = G(k, i) = GramEntry(A, i, k);
  return G;
}

bool Cholesky(Matrix& G, double pivot_tol) {
  CheckSquare(G);
  const std::size_t m = G.rows();
  for (std::size_t j = 0; j < m; ++j) {
    const double pivot = CholeskyPivot(G, j);
    if (!(pivot > pivot_tol)) return false;
    const double djj = std::sqrt(pivot);
    G(j, j) = djj;
    for (std::size_t i = j + 1; i < m; ++i) G(i, j) = CholeskyOffDiag(G, i, j, djj);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) G(i, k) = 0.0;
  return true;
}

}  // namespace serial

}  // namespace slp::kernels
