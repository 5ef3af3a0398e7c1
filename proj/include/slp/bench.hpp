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

// Instance generators and the benchmark harness.

#ifndef SLP_BENCH_HPP_
#define SLP_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slp/core.hpp"
#include "slp/dual_primal.hpp"
#include "slp/spadmm.hpp"

namespace slp::bench {

// mt19937_64 with fixed, library-independent variate transforms so that
// instances are bit-reproducible across standard libraries:
//   Uniform01: (bits >> 11) * 2^-53, shifted into (0, 1]
//   Normal:    Box-Muller on two Uniform01 draws, both outputs used
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double Uniform01();
  double Normal();
  // Uniform integer in [0, n).
  std::size_t Index(std::size_t n);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class Family { kRandomPlanted, kSimplexConstrained };

std::string_view ToString(Family family);
Family ParseFamily(std::string_view name);  // "random" | "simplex"

struct GenSpec {
  Family family = Family::kRandomPlanted;
  int n = 0;
  int m = 0;
  int r = 1;
  double u = 1.0;  // simplex family bound
  std::uint64_t seed = 0;
};

void ValidateGenSpec(const GenSpec& spec);

struct PlantedInstance {
  Problem problem;
  std::vector<double> xopt;
};

// Support size r' = ceil(U*r), |N(0,1)| values on a random r'-subset,
// A ~ N(0,1)^{m x n}, b = A xopt, l = max(xopt) e, c = e with c = 0 on the
// support. Draw order: U, permutation, support values, A row by row.
PlantedInstance GenRandomPlanted(const GenSpec& spec);

// A = e^T, b = 1, l = u e, c ~ N(0,1)^n.
Problem GenSimplex(const GenSpec& spec);

struct BenchRow {
  Family family = Family::kRandomPlanted;
  int n = 0;
  int m = 0;
  int r = 0;
  int instances = 0;
  double mean_iterations = 0.0;
  double success_rate = 0.0;
  double mean_cpu_seconds = 0.0;
};

struct InstanceRecord {
  GenSpec spec;  // seed is the per-instance seed
  int iterations = 0;
  double seconds = 0.0;
  bool success = false;
  double rel_error = 0.0;  // planted family only
  dual_primal::Solution solution;
};

struct BenchHooks {
  // Called before each solve; the returned sink receives its trace.
  std::function<spadmm::TraceSink(const GenSpec&)> trace;
  std::function<void(const InstanceRecord&)> on_instance;
};

// Instance k of a spec uses seed spec.seed + k. Success: for the planted
// family ||x - xopt|| / ||x|| < success_rel_err; for the simplex family the
// objective is within 1e-6 of the enumeration optimum when n <= 25, and the
// certificate is not Uncertified otherwise.
std::vector<BenchRow> RunBench(std::span<const GenSpec> specs, int per_spec_instances,
                               const spadmm::SolverConfig& config, double success_rel_err = 1e-2,
                               const BenchHooks& hooks = {});

std::string BenchCsvHeader();  // family,n,m,r,instances,mean_iters,success_rate,mean_cpu_s
std::string FormatBenchRow(const BenchRow& row);
std::string BenchCsv(std::span<const BenchRow> rows);

struct BenchConfig {
  std::vector<GenSpec> specs;
  int instances = 1;
  spadmm::SolverConfig solver;
  double success_rel_err = 1e-2;
};

// {"instances": K, "success_rel_err": e, "solver": {"sigma", "tau", "tol",
//  "maxiter", "adaptive_sigma"}, "specs": [{"family", "n", "m", "r", "u", "seed"}, ...]}
BenchConfig ParseBenchConfig(std::string_view json_text);

}  // namespace slp::bench

#endif  // SLP_BENCH_HPP_
