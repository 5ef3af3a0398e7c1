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

#include "slp/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace slp {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPositiveBound: return "NonPositiveBound";
    case ErrorCode::kSparsityOutOfRange: return "SparsityOutOfRange";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNotSorted: return "NotSorted";
    case ErrorCode::kNonMonotoneInput: return "NonMonotoneInput";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ToString(code)) + ": " + message), code_(code) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

IndexSet::IndexSet(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "index set has duplicate entries");
  }
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

void IndexSet::CheckInRange(std::size_t n) const {
  if (!idx_.empty() && idx_.back() >= n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "index " + std::to_string(idx_.back()) + " >= n=" + std::to_string(n));
  }
}

namespace {

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::optional<Error> Validate(const Problem& p) {
  const std::size_t m = p.m();
  const std::size_t n = p.n();
  if (m == 0 || n == 0) {
    return Error(ErrorCode::kDimensionMismatch, "A must have at least one row and column");
  }
  if (p.b.size() != m) {
    return Error(ErrorCode::kDimensionMismatch,
                 "b has length " + std::to_string(p.b.size()) + ", expected m=" +
                     std::to_string(m));
  }
  if (p.c.size() != n) {
    return Error(ErrorCode::kDimensionMismatch,
                 "c has length " + std::to_string(p.c.size()) + ", expected n=" +
                     std::to_string(n));
  }
  if (p.l.size() != n) {
    return Error(ErrorCode::kDimensionMismatch,
                 "l has length " + std::to_string(p.l.size()) + ", expected n=" +
                     std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    // NaN fails this test too and is reported below as non-finite.
    if (std::isfinite(p.l[i]) && !(p.l[i] > 0.0)) {
      return Error(ErrorCode::kNonPositiveBound, "l[" + std::to_string(i) + "] <= 0");
    }
  }
  if (p.r < 1 || static_cast<std::size_t>(p.r) > n) {
    return Error(ErrorCode::kSparsityOutOfRange,
                 "r=" + std::to_string(p.r) + " not in [1, " + std::to_string(n) + "]");
  }
  if (!AllFinite(p.A.data()) || !AllFinite(p.b) || !AllFinite(p.c) || !AllFinite(p.l)) {
    return Error(ErrorCode::kNonFiniteEntry, "problem data contains NaN or Inf");
  }
  return std::nullopt;
}

void EnsureValid(const Problem& problem) {
  if (auto err = Validate(problem)) throw *err;
}

std::size_t CountSupport(std::span<const double> x, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(x.begin(), x.end(), [&](double v) { return std::abs(v) > threshold; }));
}

bool IsFeasible(const Problem& p, std::span<const double> x, double feastol) {
  if (x.size() != p.n()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= -feastol && x[i] <= p.l[i] + feastol)) return false;
  }
  if (CountSupport(x, feastol) > static_cast<std::size_t>(p.r)) return false;
  double res2 = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    const double ri = Dot(p.A.row(i), x) - p.b[i];
    res2 += ri * ri;
  }
  return std::sqrt(res2) <= feastol;
}

double Dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double Norm2(std::span<const double> x) { return std::sqrt(Dot(x, x)); }

double NormInf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

std::string FormatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParseError, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

std::vector<double> RealArray(const json& j, const char* key) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kParseError, std::string("field \"") + key + "\" is not an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kParseError,
                  std::string("field \"") + key + "\" has a non-numeric entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::int64_t Integer(const json& j, const char* key) {
  if (!j.is_number_integer()) {
    throw Error(ErrorCode::kParseError, std::string("field \"") + key + "\" is not an integer");
  }
  return j.get<std::int64_t>();
}

}  // namespace

Problem ParseProblem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "instance is not a JSON object");

  const std::int64_t m = Integer(Field(doc, "m"), "m");
  const std::int64_t n = Integer(Field(doc, "n"), "n");
  const std::int64_t r = Integer(Field(doc, "r"), "r");
  if (m < 0 || n < 0) throw Error(ErrorCode::kDimensionMismatch, "negative m or n");

  Problem p;
  p.r = static_cast<int>(std::clamp<std::int64_t>(r, -1, std::int64_t{1} << 30));
  p.b = RealArray(Field(doc, "b"), "b");
  p.c = RealArray(Field(doc, "c"), "c");
  p.l = RealArray(Field(doc, "l"), "l");
  p.A = Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n));

  if (auto it = doc.find("A"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kParseError, "field \"A\" is not an array");
    if (it->size() != static_cast<std::size_t>(m)) {
      throw Error(ErrorCode::kDimensionMismatch, "A has " + std::to_string(it->size()) +
                                                     " rows, expected m=" + std::to_string(m));
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto row = RealArray((*it)[i], "A");
      if (row.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "row " + std::to_string(i) + " of A has wrong length");
      }
      std::copy(row.begin(), row.end(), p.A.row(i).begin());
    }
  } else if (auto sit = doc.find("A_sparse"); sit != doc.end()) {
    if (!sit->is_array()) {
      throw Error(ErrorCode::kParseError, "field \"A_sparse\" is not an array");
    }
    for (const auto& t : *sit) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
          !t[1].is_number_integer() || !t[2].is_number()) {
        throw Error(ErrorCode::kParseError, "A_sparse entries must be [i, j, v]");
      }
      const auto i = t[0].get<std::int64_t>();
      const auto j = t[1].get<std::int64_t>();
      if (i < 1 || i > m || j < 1 || j > n) {
        throw Error(ErrorCode::kIndexOutOfRange, "A_sparse index out of range");
      }
      p.A(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) +=
          t[2].get<double>();
    }
  } else {
    throw Error(ErrorCode::kParseError, "missing field \"A\" (or \"A_sparse\")");
  }

  EnsureValid(p);
  return p;
}

Problem LoadProblem(const std::string& path) { return ParseProblem(ReadFile(path)); }

namespace {

void AppendArray(std::string& out, std::span<const double> v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += FormatReal(v[i]);
  }
  out += ']';
}

}  // namespace

std::string SerializeProblem(const Problem& p) {
  std::string out = "{\n";
  out += "  \"m\": " + std::to_string(p.m()) + ",\n";
  out += "  \"n\": " + std::to_string(p.n()) + ",\n";
  out += "  \"r\": " + std::to_string(p.r) + ",\n";
  out += "  \"A\": [";
  for (std::size_t i = 0; i < p.m(); ++i) {
    out += i ? ",\n    " : "\n    ";
    AppendArray(out, p.A.row(i));
  }
  out += "\n  ],\n  \"b\": ";
  AppendArray(out, p.b);
  out += ",\n  \"c\": ";
  AppendArray(out, p.c);
  out += ",\n  \"l\": ";
  AppendArray(out, p.l);
  out += "\n}\n";
  return out;
}

void SaveProblem(const Problem& problem, const std::string& path) {
  WriteFile(path, SerializeProblem(problem));
}

}  // namespace slp
