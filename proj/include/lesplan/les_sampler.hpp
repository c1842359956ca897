#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lesplan/space.hpp"
#include "lesplan/tree.hpp"

namespace lesplan {

/// Tuning of locally exploitative sampling.
struct LesParams {
  double p_les = 0.5;            // probability of taking the exploitative branch
  double epsilon = 0.6;          // relevant-ball radius, 1.5 * range by default
  double delta = 1e-4;           // step-size floor of the randomized line search
  double fd_step = 4e-7;         // symmetric-difference half step
  double child_keep_prob = 0.5;  // per-child inclusion probability of the random subset

  /// Defaults for a planner range `eta`: epsilon = 1.5 eta, fd_step = 1e-6 eta.
  static LesParams for_range(double eta);

  /// Throws ContractViolation unless delta < epsilon / 10 and fd_step < delta.
  void validate() const;
};

/// Vertices with g(v) + h(v, x_goal) < c_i.
std::vector<VertexId> relevant_vertices(const Tree& tree, double c_i);

/// Max-heap of relevant vertices keyed by a selection weight.
///
/// The weight favors vertices whose estimated solution cost g + h is close to
/// the best estimate b and decays with every selection:
///   q_v = exp(-(g + h - b) / (c_i - b)) / (1 + selection_count).
/// Entries are versioned; superseded, irrelevant or ineligible entries are
/// discarded when they reach the top and come back through the tree's change
/// journal once the vertex changes.
class RelevantQueue {
 public:
  /// Brings the heap up to date with the tree for solution cost `c_i`.
  /// A change of c_i (or a journal overflow) triggers a full rebuild.
  void sync(Tree& tree, double c_i);

  /// Pops the highest-weight fresh vertex that is not the root, not inside the
  /// goal region and not a leaf; bumps its selection count and re-inserts it
  /// with the decayed weight.
  std::optional<VertexId> choose(Tree& tree, const GoalRegion& goal);

  double weight(const Tree& tree, VertexId v) const;
  double solution_cost() const { return c_i_; }
  std::size_t heap_size() const { return heap_.size(); }

 private:
  struct Entry {
    double weight;
    VertexId id;
    std::uint64_t version;
  };
  struct Before {
    bool operator()(const Entry& a, const Entry& b) const;
  };

  void rebuild(const Tree& tree);
  void push(const Tree& tree, VertexId v);
  bool relevant(const Tree& tree, VertexId v) const;

  std::vector<Entry> heap_;
  std::vector<std::uint64_t> versions_;
  double c_i_ = 0.0;
  double best_estimate_ = 0.0;
  bool built_ = false;
};

/// Local exploitation objective of a vertex for a fixed child subset:
///   (1 + dhat) * c(parent, x) + sum_{u in subset} (1 + n_u) * c(x, u),
/// dhat = n_v + sum_{u in subset} n_u. Additive constants are dropped.
class LocalObjective {
 public:
  LocalObjective(const Tree& tree, const CostField& field, double resolution, VertexId v,
                 std::span<const VertexId> subset);

  double operator()(const StateVector& candidate) const;

  VertexId vertex() const { return v_; }
  std::size_t dhat() const { return dhat_; }
  std::size_t subset_size() const { return children_.size(); }
  std::uint64_t evaluations() const { return evaluations_; }

 private:
  const CostField* field_;
  double resolution_;
  VertexId v_;
  StateVector parent_state_;
  std::size_t dhat_;
  std::vector<std::pair<StateVector, double>> children_;  // (state, 1 + n_u)
  mutable std::uint64_t evaluations_ = 0;
};

/// Objective value at `candidate`; throws ContractViolation for the root.
double jhat(const Tree& tree, const CostField& field, double resolution, VertexId v, const StateVector& candidate,
            std::span<const VertexId> subset);

/// Each child kept with `keep_prob`; an empty draw falls back to one uniformly
/// chosen child. Throws ContractViolation for leaves.
std::vector<VertexId> random_child_subset(const Tree& tree, VertexId v, double keep_prob, RandomStream& rng);

/// Normalized symmetric-difference gradient of the objective at the vertex
/// state, or nullopt when its norm is below 1e-12.
std::optional<StateVector> gradient_direction(const LocalObjective& objective, const StateVector& at, double fd_step);

/// f_v(x) = c(v, x) + g(v) + h(x, x_goal).
double relevant_ball_estimate(const Tree& tree, const Problem& problem, VertexId v, const StateVector& x);

/// Largest certified step gamma <= epsilon along -ehat that stays in bounds and
/// keeps f_v below c_i. Returns 0 when even gamma = delta is infeasible.
double max_step_size(const Tree& tree, const Problem& problem, VertexId v, const StateVector& ehat, double c_i,
                     const LesParams& params);

struct StepResult {
  double gamma = 0.0;
  bool improved = false;        // returned from the improvement branch
  std::uint64_t evaluations = 0;  // objective calls, including the baseline at v
};

/// Randomized shrinking line search: gamma = u^(1/d) * gamma_max until the
/// objective improves; below delta returns u^(1/d) * gamma_rel.
StepResult step_size(const LocalObjective& objective, const StateVector& at, const StateVector& ehat,
                     double gamma_rel, double delta, RandomStream& rng);

/// One row of the optional LES diagnostics stream.
struct LesEmission {
  VertexId vertex{};
  std::size_t subset_size = 0;
  double gamma = 0.0;
  bool improved = false;
  double gamma_rel = 0.0;
};

/// Full exploitative draw: choose a vertex, sample a child subset, descend the
/// local objective. Returns nullopt when no vertex is eligible, the gradient is
/// degenerate, no step is feasible, or the point fails the relevant-ball check.
std::optional<StateVector> les_sample(Tree& tree, RelevantQueue& queue, const Problem& problem, double c_i,
                                      const LesParams& params, RandomStream& rng, LesEmission* emission = nullptr);

}  // namespace lesplan
