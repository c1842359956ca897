#include "lesplan/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "lesplan/stats.hpp"

namespace lesplan {

namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

std::vector<TrialRecord> run_benchmark(const EnvironmentSpec& env, const BenchmarkConfig& config) {
  if (config.trials < 1) throw ConfigurationError("benchmark needs at least one trial");
  if (config.samplers.empty()) throw ConfigurationError("benchmark needs at least one sampler");

  struct Job {
    SamplerKind sampler;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (SamplerKind s : config.samplers) {
    for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({s, t});
  }

  std::vector<std::optional<TrialRecord>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error;

  const auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        PlannerConfig cfg = config.planner;
        cfg.sampler = jobs[i].sampler;
        cfg.seed = config.base_seed + jobs[i].trial;
        Planner planner(env.problem, cfg);
        PlannerMetrics m = planner.run();
        results[i] = TrialRecord{jobs[i].trial, jobs[i].sampler, cfg.seed, std::move(m.rows)};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed.exchange(true)) {
          error = "trial " + std::to_string(jobs[i].trial) + " (" + std::string(to_string(jobs[i].sampler)) +
                  ") failed: " + e.what();
        }
        return;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<TrialRecord> records;
  for (auto& r : results) {
    if (r) records.push_back(std::move(*r));
  }
  if (failed.load()) throw BenchmarkAborted(error, std::move(records));
  return records;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial_id,sampler,elapsed_s,iterations,best_cost,rewires\n";
  for (const auto& rec : records) {
    for (const auto& row : rec.rows) {
      out << rec.trial_id << ',' << to_string(rec.sampler) << ',' << format_number(row.elapsed_s) << ','
          << row.iterations << ',' << format_number(row.best_cost) << ',' << row.rewires << '\n';
    }
  }
}

const MetricsRow& row_at(const std::vector<MetricsRow>& rows, double t) {
  if (rows.empty()) throw ContractViolation("empty metrics stream");
  auto it = std::upper_bound(rows.begin(), rows.end(), t + 1e-12,
                             [](double value, const MetricsRow& r) { return value < r.elapsed_s; });
  if (it == rows.begin()) return rows.front();
  return *std::prev(it);
}

std::string emit_plot_data(const std::vector<TrialRecord>& records, double bucket) {
  if (records.empty()) throw ContractViolation("no trial records to summarize");
  if (!(bucket > 0.0)) throw ContractViolation("bucket width must be positive");

  std::vector<SamplerKind> order;
  double horizon = 0.0;
  for (const auto& rec : records) {
    if (std::find(order.begin(), order.end(), rec.sampler) == order.end()) order.push_back(rec.sampler);
    horizon = std::max(horizon, rec.final_row().elapsed_s);
  }
  const auto buckets = static_cast<std::size_t>(std::ceil(horizon / bucket - 1e-9));

  std::ostringstream out;
  out << "sampler,time_s,trials,miss_rate,cost_mean,cost_median,cost_std,rewires_mean,rewires_median,rewires_std,"
         "iterations_mean,iterations_median,iterations_std\n";
  for (SamplerKind sampler : order) {
    for (std::size_t k = 0; k <= buckets; ++k) {
      const double t = static_cast<double>(k) * bucket;
      std::vector<double> costs;
      std::vector<double> rewires;
      std::vector<double> iterations;
      std::size_t trials = 0;
      for (const auto& rec : records) {
        if (rec.sampler != sampler) continue;
        ++trials;
        const MetricsRow& row = row_at(rec.rows, t);
        if (std::isfinite(row.best_cost)) costs.push_back(row.best_cost);
        rewires.push_back(static_cast<double>(row.rewires));
        iterations.push_back(static_cast<double>(row.iterations));
      }
      const double miss = 1.0 - static_cast<double>(costs.size()) / static_cast<double>(trials);
      out << to_string(sampler) << ',' << format_number(t) << ',' << trials << ',' << format_number(miss) << ',';
      if (costs.empty()) {
        out << ",,";
      } else {
        out << format_number(stats::mean(costs)) << ',' << format_number(stats::median(costs)) << ','
            << format_number(stats::stddev(costs));
      }
      out << ',' << format_number(stats::mean(rewires)) << ',' << format_number(stats::median(rewires)) << ','
          << format_number(stats::stddev(rewires)) << ',' << format_number(stats::mean(iterations)) << ','
          << format_number(stats::median(iterations)) << ',' << format_number(stats::stddev(iterations)) << '\n';
    }
  }
  return out.str();
}

}  // namespace lesplan
