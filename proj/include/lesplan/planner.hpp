#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "lesplan/graph_processing.hpp"
#include "lesplan/les_sampler.hpp"
#include "lesplan/samplers.hpp"
#include "lesplan/space.hpp"
#include "lesplan/tree.hpp"

namespace lesplan {

enum class SamplerKind { uniform, informed, relevant, les };

std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

struct PlannerConfig {
  SamplerKind sampler = SamplerKind::les;
  double p_les = 0.5;  // also the relevant-region branch probability
  double eta = 0.4;
  std::optional<double> epsilon;  // defaults to 1.5 * eta
  double delta = 1e-4;
  double goal_bias = 0.05;
  double child_keep_prob = 0.5;
  std::optional<double> time_budget;  // seconds of wall clock
  std::optional<std::uint64_t> iteration_budget;
  std::uint64_t seed = 0;
  double metric_interval = 0.1;  // seconds between periodic metric rows
  /// Without a time budget the metrics clock is virtual: every iteration
  /// advances it by this many seconds, which keeps metric streams reproducible.
  double virtual_tick = 1e-3;
  RewireOptions rewire;
  /// Expand only vertices with g + h below the current solution cost during rewiring.
  bool prune_rewire = false;

  LesParams les_params() const;
  /// Throws ConfigurationError for inconsistent settings.
  void validate() const;
};

struct MetricsRow {
  double elapsed_s = 0.0;
  double best_cost = 0.0;
  std::uint64_t rewires = 0;
  std::uint64_t iterations = 0;
};

struct PlannerMetrics {
  std::vector<MetricsRow> rows;  // strictly increasing elapsed_s
  std::vector<StateVector> solution;
  double best_cost = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t rewires = 0;
  std::uint64_t exploit_branch_iterations = 0;  // u < p_les with a finite c_i
  std::uint64_t exploit_samples = 0;            // non-fallback LES / relevant samples
  std::uint64_t improving_samples = 0;          // LES samples from the improvement branch
  std::size_t vertices = 0;
};

/// min g over vertices inside the goal region, +inf when none.
double best_solution_cost(const Tree& tree, const GoalRegion& goal);

/// Root-to-goal states of the best goal vertex. Throws NoSolutionError.
std::vector<StateVector> extract_path(const Tree& tree, const GoalRegion& goal);

/// Sampling-based planner with global rewiring and a pluggable sampler.
///
/// One iteration: refresh c_i, draw u ~ U(0,1); with u < p_les and a finite
/// c_i take the exploitative branch (LES or Relevant Region, falling back to
/// informed sampling when it yields nothing), otherwise informed (or uniform)
/// sampling wrapped in the goal bias; then extend and rewire.
class Planner {
 public:
  Planner(Problem problem, PlannerConfig config);

  /// Runs one iteration; returns false once a budget is exhausted.
  bool step();
  /// Runs until a budget is exhausted and returns the final metrics.
  PlannerMetrics run();

  const Tree& tree() const { return tree_; }
  const Problem& problem() const { return problem_; }
  const PlannerConfig& config() const { return config_; }
  double best_cost() const { return best_cost_; }
  double radius() const { return radius_; }
  PlannerMetrics metrics() const;

  /// Optional CSV of exploitative emissions: iteration,vertex,subset_size,gamma,improved.
  void set_diagnostics(std::ostream* out);

 private:
  double elapsed() const;
  bool budget_left() const;
  void record(bool force);
  StateVector informed_or_uniform();
  void refresh_best_cost();

  Problem problem_;
  PlannerConfig config_;
  LesParams les_;
  Tree tree_;
  NeighborGraph graph_;
  InformedFrame frame_;
  RelevantQueue queue_;
  RandomStream rng_;
  std::vector<VertexId> goal_vertices_;
  double best_cost_;
  double radius_;
  std::uint64_t iterations_ = 0;
  std::uint64_t exploit_branch_ = 0;
  std::uint64_t exploit_samples_ = 0;
  std::uint64_t improving_samples_ = 0;
  std::vector<MetricsRow> rows_;
  double next_periodic_ = 0.0;
  std::chrono::steady_clock::time_point started_;
  std::ostream* diagnostics_ = nullptr;
};

/// Convenience wrapper: construct a Planner and run it.
PlannerMetrics plan(const Problem& problem, const PlannerConfig& config);

}  // namespace lesplan
