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

// Dense kernels used by the ADMM loop. Every kernel exists twice: an
// OpenMP version in slp::kernels and a plain loop in slp::kernels::serial.
// Both accumulate each output entry in the same index order, so results are
// bit-identical regardless of thread count; the serial versions are kept as
// the reference for tests and benchmarks.

#ifndef SLP_KERNELS_HPP_
#define SLP_KERNELS_HPP_

#include <span>

#include "slp/core.hpp"

namespace slp::kernels {

// y = A x
void Gemv(const Matrix& A, std::span<const double> x, std::span<double> y);
// x = A^T y
void GemvT(const Matrix& A, std::span<const double> y, std::span<double> x);
// G = A A^T
Matrix Gram(const Matrix& A);
// In-place lower Cholesky of the symmetric matrix G (upper triangle is
// zeroed). Returns false if some pivot falls to or below `pivot_tol`.
bool Cholesky(Matrix& G, double pivot_tol);
// Solves (L L^T) x = rhs in place.
void CholeskySolve(const Matrix& L, std::span<double> rhs);

namespace serial {
void Gemv(const Matrix& A, std::span<const double> x, std::span<double> y);
void GemvT(const Matrix& A, std::span<const double> y, std::span<double> x);
Matrix Gram(const Matrix& A);
bool Cholesky(Matrix& G, double pivot_tol);
}  // namespace serial

}  // namespace slp::kernels

#endif  // SLP_KERNELS_HPP_
