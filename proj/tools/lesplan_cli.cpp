// Command-line front end: single planning runs, benchmark ensembles, the
// random-search bound check, and preset generation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lesplan/appendix.hpp"
#include "lesplan/benchmark.hpp"
#include "lesplan/environment.hpp"
#include "lesplan/planner.hpp"
#include "lesplan/stats.hpp"

namespace fs = std::filesystem;
using namespace lesplan;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  return out;
}

struct RunOptions {
  std::string env;
  double time = 0.0;
  std::uint64_t iterations = 0;
  double eta = 0.0;
  double p_les = 0.5;
  double goal_bias = 0.05;
};

PlannerConfig planner_config(const RunOptions& opt, const EnvironmentSpec& env) {
  PlannerConfig cfg;
  if (opt.eta > 0.0) {
    cfg.eta = opt.eta;
  } else if (env.eta) {
    cfg.eta = *env.eta;
  }
  cfg.p_les = opt.p_les;
  cfg.goal_bias = opt.goal_bias;
  if (opt.time > 0.0) cfg.time_budget = opt.time;
  if (opt.iterations > 0) cfg.iteration_budget = opt.iterations;
  if (!cfg.time_budget && !cfg.iteration_budget) cfg.time_budget = 10.0;
  return cfg;
}

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--env", opt.env, "Environment JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--time", opt.time, "Wall-clock budget per run in seconds");
  cmd->add_option("--iterations", opt.iterations, "Iteration budget per run (deterministic metrics clock)");
  cmd->add_option("--eta", opt.eta, "Range; defaults to the environment's eta");
  cmd->add_option("--p-les", opt.p_les, "Probability of the exploitative branch");
  cmd->add_option("--goal-bias", opt.goal_bias, "Goal bias of the informed branch");
}

int run_plan(const RunOptions& opt, const std::string& sampler, std::uint64_t seed, const std::string& out,
             const std::string& path_out, const std::string& tree_out, const std::string& diag_out) {
  const EnvironmentSpec env = load_environment(opt.env);
  PlannerConfig cfg = planner_config(opt, env);
  cfg.sampler = parse_sampler(sampler);
  cfg.seed = seed;

  Planner planner(env.problem, cfg);
  std::ofstream diag;
  if (!diag_out.empty()) {
    diag = open_output(diag_out);
    planner.set_diagnostics(&diag);
  }
  const PlannerMetrics m = planner.run();

  std::vector<TrialRecord> records{TrialRecord{0, cfg.sampler, seed, m.rows}};
  if (out.empty()) {
    write_trials_csv(std::cout, records);
  } else {
    auto f = open_output(out);
    write_trials_csv(f, records);
  }
  if (!path_out.empty()) open_output(path_out) << path_to_json(m.solution).dump(2) << '\n';
  if (!tree_out.empty()) open_output(tree_out) << tree_to_json(planner.tree()).dump() << '\n';

  std::cerr << env.name << " sampler=" << to_string(cfg.sampler) << " iterations=" << m.iterations
            << " vertices=" << m.vertices << " rewires=" << m.rewires << " best_cost=" << m.best_cost << '\n';
  return 0;
}

int run_bench(const RunOptions& opt, const std::string& samplers, std::size_t trials, std::uint64_t base_seed,
              std::size_t workers, double bucket, const std::string& out_dir) {
  const EnvironmentSpec env = load_environment(opt.env);
  BenchmarkConfig cfg;
  cfg.samplers.clear();
  for (const auto& name : split_list(samplers)) cfg.samplers.push_back(parse_sampler(name));
  cfg.trials = trials;
  cfg.base_seed = base_seed;
  cfg.workers = workers;
  cfg.planner = planner_config(opt, env);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto flush = [&](const std::vector<TrialRecord>& records) {
    auto trials_csv = open_output(dir / "trials.csv");
    write_trials_csv(trials_csv, records);
    if (!records.empty()) open_output(dir / "summary.csv") << emit_plot_data(records, bucket);
  };

  std::vector<TrialRecord> records;
  try {
    records = run_benchmark(env, cfg);
  } catch (const BenchmarkAborted& e) {
    flush(e.partial());
    std::cerr << "benchmark aborted: " << e.what() << '\n';
    return 2;
  }
  flush(records);

  std::printf("%-10s %14s %14s %14s\n", "sampler", "median_cost", "median_rewires", "median_iters");
  for (SamplerKind s : cfg.samplers) {
    std::vector<double> cost, rewires, iters;
    for (const auto& r : records) {
      if (r.sampler != s) continue;
      cost.push_back(r.final_row().best_cost);
      rewires.push_back(static_cast<double>(r.final_row().rewires));
      iters.push_back(static_cast<double>(r.final_row().iterations));
    }
    std::printf("%-10s %14.6g %14.6g %14.6g\n", std::string(to_string(s)).c_str(), stats::median(cost),
                stats::median(rewires), stats::median(iters));
  }
  return 0;
}

int run_verify(const std::string& dims, double ratio, std::size_t samples, std::uint64_t seed) {
  RandomStream rng(seed);
  bool ok = true;
  std::printf("%4s %12s %12s %12s %10s %6s\n", "d", "empirical_p", "bound", "sigma", "r_c", "ok");
  for (const auto& token : split_list(dims)) {
    const AppendixResult r = appendix_verify(std::stoi(token), ratio, samples, rng);
    ok = ok && r.within_bound;
    std::printf("%4d %12.6f %12.6f %12.6f %10.6f %6s\n", r.dimension, r.empirical_p, r.bound, r.sigma, r.r_c,
                r.within_bound ? "yes" : "NO");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based planning with locally exploitative sampling"};
  app.require_subcommand(1);

  RunOptions plan_opt;
  std::string sampler = "les";
  std::uint64_t seed = 0;
  std::string out, path_out, tree_out, diag_out;
  auto* plan_cmd = app.add_subcommand("plan", "Run one planner and write its metrics CSV");
  add_run_options(plan_cmd, plan_opt);
  plan_cmd->add_option("--sampler", sampler, "uniform|informed|relevant|les");
  plan_cmd->add_option("--seed", seed, "RNG seed");
  plan_cmd->add_option("--out", out, "Metrics CSV (stdout when omitted)");
  plan_cmd->add_option("--path", path_out, "Write the solution path as JSON");
  plan_cmd->add_option("--tree", tree_out, "Write a tree snapshot as JSON");
  plan_cmd->add_option("--diagnostics", diag_out, "Write per-emission LES diagnostics CSV");

  RunOptions bench_opt;
  std::string samplers = "les,informed,relevant";
  std::size_t trials = 30;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  double bucket = 0.1;
  std::string out_dir = "bench_out";
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark ensemble and write trials/summary CSVs");
  add_run_options(bench_cmd, bench_opt);
  bench_cmd->add_option("--samplers", samplers, "Comma separated sampler list");
  bench_cmd->add_option("--trials", trials, "Trials per sampler");
  bench_cmd->add_option("--base-seed", base_seed, "Seed of trial 0");
  bench_cmd->add_option("--workers", workers, "Worker threads");
  bench_cmd->add_option("--bucket", bucket, "Summary time bucket in seconds");
  bench_cmd->add_option("--out", out_dir, "Output directory");

  std::string dims = "2,6,10,14";
  double ratio = 0.5;
  std::size_t samples = 100000;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify-appendix", "Monte-Carlo check of the random local search bound");
  verify_cmd->add_option("--dims", dims, "Comma separated dimensions");
  verify_cmd->add_option("--ratio", ratio, "epsilon / |x_o| in (0, 1)");
  verify_cmd->add_option("--samples", samples, "Samples per dimension");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed");

  int preset_dim = 2;
  std::string preset_out;
  auto* preset_cmd = app.add_subcommand("preset", "Write a potential cost-map preset environment");
  preset_cmd->add_option("--dim", preset_dim, "2, 4 or 6");
  preset_cmd->add_option("--out", preset_out, "Output JSON (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan_cmd) return run_plan(plan_opt, sampler, seed, out, path_out, tree_out, diag_out);
    if (*bench_cmd) return run_bench(bench_opt, samplers, trials, base_seed, workers, bucket, out_dir);
    if (*verify_cmd) return run_verify(dims, ratio, samples, verify_seed);
    if (*preset_cmd) {
      const std::string doc = to_json(potential_preset(preset_dim)).dump(2);
      if (preset_out.empty()) {
        std::cout << doc << '\n';
      } else {
        open_output(preset_out) << doc << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
