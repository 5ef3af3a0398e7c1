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

// Command-line front end: solve, gen, oracle, bench.
//
// Exit codes: 0 success, 1 solver failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slp/bench.hpp"
#include "slp/core.hpp"
#include "slp/dual_primal.hpp"
#include "slp/oracle.hpp"
#include "slp/spadmm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitInputError = 2;

using nlohmann::ordered_json;

ordered_json IndexSetJson(const slp::IndexSet& set) {
  ordered_json a = ordered_json::array();
  for (auto i : set) a.push_back(i + 1);
  return a;
}

std::string DefaultSolutionPath(const std::string& instance) {
  const auto dot = instance.rfind(".json");
  const std::string stem = dot == std::string::npos ? instance : instance.substr(0, dot);
  return stem + ".solution.json";
}

struct SolveArgs {
  std::string instance;
  slp::spadmm::SolverConfig config;
  std::string trace;
  std::string out;
};

int RunSolve(const SolveArgs& args) {
  const auto problem = slp::LoadProblem(args.instance);
  slp::spadmm::ValidateConfig(args.config);

  std::unique_ptr<std::ofstream> trace_file;
  slp::spadmm::TraceSink sink;
  if (!args.trace.empty()) {
    trace_file = std::make_unique<std::ofstream>(args.trace);
    if (!*trace_file) throw slp::Error(slp::ErrorCode::kIoError, "cannot open " + args.trace);
    *trace_file << slp::spadmm::TraceCsvHeader() << '\n';
    sink = [&](const slp::spadmm::TraceRecord& rec) {
      *trace_file << slp::spadmm::FormatTraceCsv(rec) << '\n';
    };
  }

  const auto sol = slp::dual_primal::Solve(problem, args.config, sink);
  const auto& st = sol.dual_stats;
  const bool recovered = sol.status == slp::dual_primal::RecoveryStatus::kRecovered;

  std::printf("objective     %s\n", recovered ? slp::FormatReal(sol.objective).c_str() : "n/a");
  std::printf("certificate   %s\n", std::string(ToString(sol.certificate.kind)).c_str());
  std::printf("dual value    %s\n", slp::FormatReal(sol.dual_objective).c_str());
  std::printf("zeta          %.3e\n", st.zeta);
  std::printf("eta           %.3e\n", st.eta);
  std::printf("iterations    %d\n", st.iterations);
  std::printf("final sigma   %.6g\n", st.final_sigma);
  std::printf("dual status   %s\n", std::string(ToString(st.status)).c_str());

  ordered_json doc;
  doc["status"] = recovered ? "recovered" : "restricted_infeasible";
  doc["objective"] = recovered ? ordered_json(sol.objective) : ordered_json(nullptr);
  doc["certificate"] = std::string(ToString(sol.certificate.kind));
  doc["index_set"] = IndexSetJson(sol.certificate.index_set);
  doc["dual_objective"] = sol.dual_objective;
  doc["zeta"] = st.zeta;
  doc["eta"] = st.eta;
  doc["iterations"] = st.iterations;
  doc["x"] = sol.x;
  const std::string out = args.out.empty() ? DefaultSolutionPath(args.instance) : args.out;
  slp::WriteFile(out, doc.dump(2) + "\n");
  std::printf("solution      %s\n", out.c_str());

  if (!recovered) return kExitSolverFailure;
  if (st.status == slp::spadmm::Status::kMaxIterReached &&
      (st.zeta > args.config.tol || st.eta > args.config.tol))
    return kExitSolverFailure;
  return kExitOk;
}

struct GenArgs {
  std::string family = "random";
  int n = 0;
  int m = -1;
  int r = 1;
  double u = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string xopt;
};

int RunGen(const GenArgs& args) {
  slp::bench::GenSpec spec;
  spec.family = slp::bench::ParseFamily(args.family);
  spec.n = args.n;
  spec.m = args.m >= 0 ? args.m : (spec.family == slp::bench::Family::kSimplexConstrained ? 1 : 0);
  spec.r = args.r;
  spec.u = args.u;
  spec.seed = args.seed;
  if (spec.family == slp::bench::Family::kRandomPlanted) {
    const auto inst = slp::bench::GenRandomPlanted(spec);
    slp::SaveProblem(inst.problem, args.out);
    if (!args.xopt.empty()) {
      ordered_json doc;
      doc["xopt"] = inst.xopt;
      slp::WriteFile(args.xopt, doc.dump(2) + "\n");
    }
  } else {
    if (!args.xopt.empty())
      throw slp::Error(slp::ErrorCode::kInvalidArgument, "--xopt needs the random family");
    slp::SaveProblem(slp::bench::GenSimplex(spec), args.out);
  }
  return kExitOk;
}

int RunOracle(const std::string& instance) {
  const auto problem = slp::LoadProblem(instance);
  const auto res = slp::oracle::EnumerateOptimal(problem);
  if (!res.feasible) {
    std::printf("infeasible\n");
    return kExitOk;
  }
  std::printf("optimum       %s\n", slp::FormatReal(res.optimum).c_str());
  for (const auto& set : res.optimal_index_sets) std::printf("index set     %s\n", IndexSetJson(set).dump().c_str());
  if (!res.minimizers.empty())
    std::printf("minimizer     %s\n", ordered_json(res.minimizers.front()).dump().c_str());
  return kExitOk;
}

int RunBenchCommand(const std::string& config_path, const std::string& out) {
  const auto cfg = slp::bench::ParseBenchConfig(slp::ReadFile(config_path));
  slp::bench::BenchHooks hooks;
  hooks.on_instance = [](const slp::bench::InstanceRecord& rec) {
    std::fprintf(stderr, "%s n=%d r=%d seed=%llu iters=%d %.3fs %s\n",
                 std::string(ToString(rec.spec.family)).c_str(), rec.spec.n, rec.spec.r,
                 static_cast<unsigned long long>(rec.spec.seed), rec.iterations, rec.seconds,
                 rec.success ? "ok" : "FAIL");
  };
  const auto rows = slp::bench::RunBench(cfg.specs, cfg.instances, cfg.solver,
                                         cfg.success_rel_err, hooks);
  const auto csv = slp::bench::BenchCsv(rows);
  if (out.empty() || out == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    slp::WriteFile(out, csv);
  }
  return kExitOk;
}

void AddSolverOptions(CLI::App* cmd, slp::spadmm::SolverConfig& cfg) {
  cmd->add_option("--sigma", cfg.sigma, "penalty parameter")->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "dual step length")->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "stopping tolerance on zeta and eta")->capture_default_str();
  cmd->add_option("--maxiter", cfg.maxiter, "iteration cap")->capture_default_str();
  cmd->add_flag("--adaptive-sigma", cfg.adaptive_sigma, "residual balancing on sigma");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse LP solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("instance", solve.instance, "instance JSON")->required();
  AddSolverOptions(solve_cmd, solve.config);
  solve_cmd->add_option("--trace", solve.trace, "per-iteration CSV");
  solve_cmd->add_option("--out", solve.out, "solution JSON (default <instance>.solution.json)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("--family", gen.family, "random | simplex")
      ->check(CLI::IsMember({"random", "simplex"}))
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "variables")->required();
  gen_cmd->add_option("--m", gen.m, "constraints (simplex: 1)");
  gen_cmd->add_option("--r", gen.r, "sparsity level")->required();
  gen_cmd->add_option("--u", gen.u, "simplex bound")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "instance JSON")->required();
  gen_cmd->add_option("--xopt", gen.xopt, "planted solution JSON (random family)");

  std::string oracle_instance;
  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate every support (n <= 25)");
  oracle_cmd->add_option("instance", oracle_instance, "instance JSON")->required();

  std::string bench_config, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark configuration");
  bench_cmd->add_option("--config", bench_config, "bench JSON")->required();
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*gen_cmd) return RunGen(gen);
    if (*oracle_cmd) return RunOracle(oracle_instance);
    if (*bench_cmd) return RunBenchCommand(bench_config, bench_out);
  } catch (const slp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    // Numerical breakdowns are solver failures; everything else is bad input.
    return e.code() == slp::ErrorCode::kCycleDetected ||
                   e.code() == slp::ErrorCode::kDegenerateMatrix
               ? kExitSolverFailure
               : kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolverFailure;
  }
  return kExitInputError;
}
