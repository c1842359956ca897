#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lesplan/environment.hpp"
#include "lesplan/planner.hpp"

namespace lesplan {

struct TrialRecord {
  std::size_t trial_id = 0;
  SamplerKind sampler = SamplerKind::les;
  std::uint64_t seed = 0;
  std::vector<MetricsRow> rows;

  const MetricsRow& final_row() const { return rows.back(); }
};

struct BenchmarkConfig {
  std::vector<SamplerKind> samplers{SamplerKind::les, SamplerKind::informed, SamplerKind::relevant};
  std::size_t trials = 30;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  /// Template for every trial; sampler and seed are overwritten per trial.
  PlannerConfig planner;
};

/// Thrown when a trial fails; carries the records finished before the failure.
class BenchmarkAborted : public std::runtime_error {
 public:
  BenchmarkAborted(const std::string& what, std::vector<TrialRecord> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<TrialRecord>& partial() const { return partial_; }

 private:
  std::vector<TrialRecord> partial_;
};

/// Runs every (sampler, trial) pair with seed = base_seed + trial_id on a pool
/// of `workers` threads. Records come back ordered by sampler (config order),
/// then trial id, independent of scheduling.
std::vector<TrialRecord> run_benchmark(const EnvironmentSpec& env, const BenchmarkConfig& config);

/// Columns: trial_id,sampler,elapsed_s,iterations,best_cost,rewires
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Per (sampler, time bucket) mean / median / standard deviation of best cost,
/// rewires and iterations. Unsolved trials count toward miss_rate and are
/// excluded from the cost statistics.
std::string emit_plot_data(const std::vector<TrialRecord>& records, double bucket);

/// Value of a metrics stream at time t: the last row with elapsed_s <= t.
const MetricsRow& row_at(const std::vector<MetricsRow>& rows, double t);

}  // namespace lesplan
