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

#include "slp/bench.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include "slp/kernels.hpp"
#include "slp/oracle.hpp"

namespace slp::bench {

namespace {

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
constexpr double kSimplexObjTol = 1e-6;

// [0, 1)
double Uniform01Closed0(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * kTwoPow53Inv;
}

std::string Fixed(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

double Rng::Uniform01() {
  return static_cast<double>((gen_() >> 11) + 1) * kTwoPow53Inv;
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = Uniform01();
  const double u2 = Uniform01();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

std::size_t Rng::Index(std::size_t n) {
  const auto k = static_cast<std::size_t>(Uniform01Closed0(gen_) * static_cast<double>(n));
  return std::min(k, n - 1);
}

std::string_view ToString(Family family) {
  switch (family) {
    case Family::kRandomPlanted: return "random";
    case Family::kSimplexConstrained: return "simplex";
  }
  return "unknown";
}

Family ParseFamily(std::string_view name) {
  if (name == "random" || name == "RandomPlanted") return Family::kRandomPlanted;
  if (name == "simplex" || name == "SimplexConstrained") return Family::kSimplexConstrained;
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + std::string(name) + "'");
}

void ValidateGenSpec(const GenSpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  if (spec.r < 1 || spec.r > spec.n)
    throw Error(ErrorCode::kSparsityOutOfRange, "need 1 <= r <= n");
  if (spec.family == Family::kSimplexConstrained) {
    if (spec.m != 1) throw Error(ErrorCode::kInvalidArgument, "simplex family needs m = 1");
    if (!(spec.u > 0.0) || !std::isfinite(spec.u))
      throw Error(ErrorCode::kNonPositiveBound, "u must be positive and finite");
  } else if (spec.m < 1 || spec.m >= spec.n) {
    throw Error(ErrorCode::kInvalidArgument, "random family needs 1 <= m < n");
  }
}

PlantedInstance GenRandomPlanted(const GenSpec& spec) {
  ValidateGenSpec(spec);
  if (spec.family != Family::kRandomPlanted)
    throw Error(ErrorCode::kInvalidArgument, "spec is not of the random family");
  const auto n = static_cast<std::size_t>(spec.n);
  const auto m = static_cast<std::size_t>(spec.m);
  Rng rng(spec.seed);

  const auto rp = std::clamp(static_cast<int>(std::ceil(rng.Uniform01() * spec.r)), 1, spec.r);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.Index(i + 1)]);

  PlantedInstance out;
  out.xopt.assign(n, 0.0);
  for (int k = 0; k < rp; ++k) {
    // A zero draw would shrink the support; it has probability ~0 but stay safe.
    double v = std::abs(rng.Normal());
    while (v == 0.0) v = std::abs(rng.Normal());
    out.xopt[perm[static_cast<std::size_t>(k)]] = v;
  }

  Problem& p = out.problem;
  p.A = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.A(i, j) = rng.Normal();
  p.b.assign(m, 0.0);
  kernels::Gemv(p.A, out.xopt, p.b);
  const double top = *std::max_element(out.xopt.begin(), out.xopt.end());
  p.l.assign(n, top);
  p.c.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    if (out.xopt[j] > 0.0) p.c[j] = 0.0;
  p.r = spec.r;
  return out;
}

Problem GenSimplex(const GenSpec& spec) {
  ValidateGenSpec(spec);
  if (spec.family != Family::kSimplexConstrained)
    throw Error(ErrorCode::kInvalidArgument, "spec is not of the simplex family");
  const auto n = static_cast<std::size_t>(spec.n);
  Rng rng(spec.seed);
  Problem p;
  p.A = Matrix(1, n, 1.0);
  p.b = {1.0};
  p.l.assign(n, spec.u);
  p.c.resize(n);
  for (auto& v : p.c) v = rng.Normal();
  p.r = spec.r;
  return p;
}

std::vector<BenchRow> RunBench(std::span<const GenSpec> specs, int per_spec_instances,
                               const spadmm::SolverConfig& config, double success_rel_err,
                               const BenchHooks& hooks) {
  if (per_spec_instances < 1)
    throw Error(ErrorCode::kInvalidArgument, "per_spec_instances must be >= 1");
  spadmm::ValidateConfig(config);
  std::vector<BenchRow> rows;
  rows.reserve(specs.size());
  for (const auto& base : specs) {
    ValidateGenSpec(base);
    BenchRow row{base.family, base.n, base.m, base.r, per_spec_instances, 0.0, 0.0, 0.0};
    double iters = 0.0, secs = 0.0;
    int ok = 0;
    for (int k = 0; k < per_spec_instances; ++k) {
      InstanceRecord rec;
      rec.spec = base;
      rec.spec.seed = base.seed + static_cast<std::uint64_t>(k);

      Problem p;
      std::vector<double> xopt;
      if (base.family == Family::kRandomPlanted) {
        auto inst = GenRandomPlanted(rec.spec);
        p = std::move(inst.problem);
        xopt = std::move(inst.xopt);
      } else {
        p = GenSimplex(rec.spec);
      }
      spadmm::TraceSink sink = hooks.trace ? hooks.trace(rec.spec) : spadmm::TraceSink{};

      const auto t0 = std::chrono::steady_clock::now();
      rec.solution = dual_primal::Solve(p, config, sink);
      const auto t1 = std::chrono::steady_clock::now();
      rec.seconds = std::chrono::duration<double>(t1 - t0).count();
      rec.iterations = rec.solution.dual_stats.iterations;

      const auto& sol = rec.solution;
      const bool recovered = sol.status == dual_primal::RecoveryStatus::kRecovered;
      if (base.family == Family::kRandomPlanted) {
        double diff = 0.0;
        for (std::size_t j = 0; j < xopt.size(); ++j) {
          const double d = sol.x[j] - xopt[j];
          diff += d * d;
        }
        const double nx = Norm2(sol.x);
        rec.rel_error = nx > 0.0 ? std::sqrt(diff) / nx : std::numeric_limits<double>::infinity();
        rec.success = recovered && rec.rel_error < success_rel_err;
      } else if (static_cast<std::size_t>(base.n) <= oracle::kMaxEnumerationN) {
        const auto truth = oracle::EnumerateOptimal(p);
        rec.success = recovered && truth.feasible && sol.objective <= truth.optimum + kSimplexObjTol;
      } else {
        rec.success =
            recovered && sol.certificate.kind != dual_primal::CertificateKind::kUncertified;
      }

      iters += rec.iterations;
      secs += rec.seconds;
      ok += rec.success ? 1 : 0;
      if (hooks.on_instance) hooks.on_instance(rec);
    }
    row.mean_iterations = iters / per_spec_instances;
    row.success_rate = static_cast<double>(ok) / per_spec_instances;
    row.mean_cpu_seconds = secs / per_spec_instances;
    rows.push_back(row);
  }
  return rows;
}

std::string BenchCsvHeader() {
  return "family,n,m,r,instances,mean_iters,success_rate,mean_cpu_s";
}

std::string FormatBenchRow(const BenchRow& row) {
  std::string s(ToString(row.family));
  s += ',' + std::to_string(row.n) + ',' + std::to_string(row.m) + ',' + std::to_string(row.r) +
       ',' + std::to_string(row.instances) + ',' + Fixed(row.mean_iterations, "%.2f") + ',' +
       Fixed(row.success_rate, "%.4f") + ',' + Fixed(row.mean_cpu_seconds, "%.6f");
  return s;
}

std::string BenchCsv(std::span<const BenchRow> rows) {
  std::string out = BenchCsvHeader() + '\n';
  for (const auto& row : rows) out += FormatBenchRow(row) + '\n';
  return out;
}

BenchConfig ParseBenchConfig(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bench config: ") + e.what());
  }
  BenchConfig cfg;
  try {
    cfg.instances = doc.value("instances", 1);
    cfg.success_rel_err = doc.value("success_rel_err", 1e-2);
    if (doc.contains("solver")) {
      const auto& s = doc.at("solver");
      cfg.solver.sigma = s.value("sigma", cfg.solver.sigma);
      cfg.solver.tau = s.value("tau", cfg.solver.tau);
      cfg.solver.tol = s.value("tol", cfg.solver.tol);
      cfg.solver.maxiter = s.value("maxiter", cfg.solver.maxiter);
      cfg.solver.adaptive_sigma = s.value("adaptive_sigma", cfg.solver.adaptive_sigma);
    }
    for (const auto& e : doc.at("specs")) {
      GenSpec g;
      g.family = ParseFamily(e.at("family").get<std::string>());
      g.n = e.at("n").get<int>();
      g.m = e.value("m", g.family == Family::kSimplexConstrained ? 1 : 0);
      g.r = e.at("r").get<int>();
      g.u = e.value("u", 1.0);
      g.seed = e.value("seed", std::uint64_t{0});
      ValidateGenSpec(g);
      cfg.specs.push_back(g);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bench config: ") + e.what());
  }
  if (cfg.instances < 1) throw Error(ErrorCode::kInvalidArgument, "instances must be >= 1");
  spadmm::ValidateConfig(cfg.solver);
  return cfg;
}

}  // namespace slp::bench
