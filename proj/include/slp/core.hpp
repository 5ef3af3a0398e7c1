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

// Problem representation shared by every module: the sparse LP
//
//   min c^T x  s.t.  A x = b,  0 <= x <= l,  ||x||_0 <= r
//
// with A dense row-major. Indices are 0-based in the C++ API and 1-based in
// every external format (instance JSON "A_sparse", CLI index-set output).

#ifndef SLP_CORE_HPP_
#define SLP_CORE_HPP_

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slp {

enum class ErrorCode {
  kDimensionMismatch,
  kNonPositiveBound,
  kSparsityOutOfRange,
  kNonFiniteEntry,
  kParseError,
  kIndexOutOfRange,
  kNotSorted,
  kNonMonotoneInput,
  kInvalidArgument,
  kDegenerateMatrix,
  kCycleDetected,
  kTooLarge,
  kIoError,
};

std::string_view ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Sorted list of distinct 0-based indices.
class IndexSet {
 public:
  IndexSet() = default;
  // Sorts and rejects duplicates (kInvalidArgument).
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices)
      : IndexSet(std::vector<std::size_t>(indices)) {}

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  std::size_t operator[](std::size_t k) const { return idx_[k]; }
  const std::vector<std::size_t>& indices() const { return idx_; }
  bool contains(std::size_t i) const;

  // Throws kIndexOutOfRange if any entry is >= n.
  void CheckInRange(std::size_t n) const;

  bool operator==(const IndexSet&) const = default;
  auto operator<=>(const IndexSet&) const = default;

 private:
  std::vector<std::size_t> idx_;
};

struct Problem {
  Matrix A;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> l;
  int r = 1;

  std::size_t m() const { return A.rows(); }
  std::size_t n() const { return A.cols(); }
  bool operator==(const Problem&) const = default;
};

inline constexpr double kDefaultFeasTol = 1e-8;

// First violated invariant, or nullopt when the problem is well formed.
std::optional<Error> Validate(const Problem& problem);
// Throws the first violated invariant.
void EnsureValid(const Problem& problem);

// ||Ax - b||_2 <= feastol, -feastol <= x_i <= l_i + feastol and at most r
// entries with |x_i| > feastol.
bool IsFeasible(const Problem& problem, std::span<const double> x,
                double feastol = kDefaultFeasTol);

// Number of entries with magnitude above `threshold`.
std::size_t CountSupport(std::span<const double> x, double threshold);

// Instance file I/O. Reals are written with 17 significant digits.
Problem ParseProblem(std::string_view json_text);
Problem LoadProblem(const std::string& path);
std::string SerializeProblem(const Problem& problem);
void SaveProblem(const Problem& problem, const std::string& path);

// Small shared helpers.
double Dot(std::span<const double> x, std::span<const double> y);
double Norm2(std::span<const double> x);
double NormInf(std::span<const double> x);
std::string FormatReal(double v);  // %.17g
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace slp

#endif  // SLP_CORE_HPP_
