#include "lesplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace lesplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::uniform:
      return "uniform";
    case SamplerKind::informed:
      return "informed";
    case SamplerKind::relevant:
      return "relevant";
    case SamplerKind::les:
      return "les";
  }
  return "unknown";
}

SamplerKind parse_sampler(std::string_view name) {
  if (name == "uniform") return SamplerKind::uniform;
  if (name == "informed") return SamplerKind::informed;
  if (name == "relevant") return SamplerKind::relevant;
  if (name == "les") return SamplerKind::les;
  throw ConfigurationError("unknown sampler '" + std::string(name) + "'");
}

LesParams PlannerConfig::les_params() const {
  LesParams p = LesParams::for_range(eta);
  p.p_les = p_les;
  if (epsilon) p.epsilon = *epsilon;
  p.delta = delta;
  p.child_keep_prob = child_keep_prob;
  return p;
}

void PlannerConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigurationError("eta must be positive");
  if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw ConfigurationError("goal bias must lie in [0, 1]");
  if (!time_budget && !iteration_budget) throw ConfigurationError("set a time budget, an iteration budget, or both");
  if (time_budget && !(*time_budget > 0.0)) throw ConfigurationError("time budget must be positive");
  if (!(metric_interval > 0.0) || !(virtual_tick > 0.0)) throw ConfigurationError("metric clock settings must be positive");
  try {
    les_params().validate();
  } catch (const ContractViolation& e) {
    throw ConfigurationError(e.what());
  }
}

double best_solution_cost(const Tree& tree, const GoalRegion& goal) {
  double best = kInf;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const VertexId v = vertex_id(i);
    if (goal.contains(tree.state(v))) best = std::min(best, tree.g(v));
  }
  return best;
}

std::vector<StateVector> extract_path(const Tree& tree, const GoalRegion& goal) {
  std::optional<VertexId> best;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const VertexId v = vertex_id(i);
    if (goal.contains(tree.state(v)) && (!best || tree.g(v) < tree.g(*best))) best = v;
  }
  if (!best) throw NoSolutionError("no vertex reached the goal region");
  std::vector<StateVector> path;
  VertexId cur = *best;
  for (;;) {
    path.push_back(tree.state(cur));
    if (cur == tree.root()) break;
    cur = tree.parent(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Planner::Planner(Problem problem, PlannerConfig config)
    : problem_(std::move(problem)),
      config_(std::move(config)),
      les_((config_.validate(), config_.les_params())),
      tree_((problem_.validate(), problem_.start), problem_.goal.center),
      frame_(problem_.start, problem_.goal.center),
      rng_(config_.seed),
      best_cost_(kInf),
      radius_(config_.eta),
      started_(std::chrono::steady_clock::now()) {
  if (problem_.goal.contains(problem_.start)) goal_vertices_.push_back(tree_.root());
  refresh_best_cost();
  rows_.push_back(MetricsRow{0.0, best_cost_, 0, 0});
  next_periodic_ = config_.metric_interval;
}

void Planner::set_diagnostics(std::ostream* out) {
  diagnostics_ = out;
  if (diagnostics_) *diagnostics_ << "iteration,vertex,subset_size,gamma,improved\n";
}

double Planner::elapsed() const {
  if (!config_.time_budget) return static_cast<double>(iterations_) * config_.virtual_tick;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
}

bool Planner::budget_left() const {
  if (config_.iteration_budget && iterations_ >= *config_.iteration_budget) return false;
  if (config_.time_budget && elapsed() >= *config_.time_budget) return false;
  return true;
}

void Planner::refresh_best_cost() {
  for (VertexId v : goal_vertices_) best_cost_ = std::min(best_cost_, tree_.g(v));
}

StateVector Planner::informed_or_uniform() {
  if (config_.sampler == SamplerKind::uniform) return sample_uniform(problem_.space, rng_);
  return informed_sample(frame_, best_cost_, problem_.space, rng_);
}

void Planner::record(bool force) {
  const double t = elapsed();
  const bool periodic = t >= next_periodic_;
  if (!force && !periodic) return;
  if (periodic) next_periodic_ = (std::floor(t / config_.metric_interval) + 1.0) * config_.metric_interval;
  const MetricsRow row{t, best_cost_, tree_.rewire_count(), iterations_};
  if (!rows_.empty() && !(t > rows_.back().elapsed_s)) {
    rows_.back() = MetricsRow{rows_.back().elapsed_s, best_cost_, row.rewires, row.iterations};
  } else {
    rows_.push_back(row);
  }
}

bool Planner::step() {
  if (!budget_left()) return false;
  const double c_i = best_cost_;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  const auto biased = [this] { return goal_biased([this] { return informed_or_uniform(); }, problem_.goal, config_.goal_bias, rng_); };

  std::optional<StateVector> x_rand;
  const bool exploit = config_.sampler == SamplerKind::les || config_.sampler == SamplerKind::relevant;
  if (exploit && u < les_.p_les && std::isfinite(c_i)) {
    ++exploit_branch_;
    queue_.sync(tree_, c_i);
    if (config_.sampler == SamplerKind::les) {
      LesEmission emission;
      x_rand = les_sample(tree_, queue_, problem_, c_i, les_, rng_, &emission);
      if (x_rand) {
        ++exploit_samples_;
        if (emission.improved) ++improving_samples_;
        if (diagnostics_) {
          *diagnostics_ << iterations_ << ',' << index_of(emission.vertex) << ',' << emission.subset_size << ','
                        << emission.gamma << ',' << (emission.improved ? 1 : 0) << '\n';
        }
      }
    } else {
      x_rand = relevant_region_sample(tree_, queue_, problem_, c_i, les_, rng_);
      if (x_rand) ++exploit_samples_;
    }
    if (!x_rand) x_rand = biased();
  } else {
    x_rand = biased();
  }

  radius_ = connection_radius(tree_.size(), config_.eta, problem_.space);
  if (const auto added = local_extend_connect(tree_, problem_, *x_rand, config_.eta, radius_, &graph_)) {
    if (problem_.goal.contains(tree_.state(*added))) goal_vertices_.push_back(*added);
    RewireOptions options = config_.rewire;
    if (config_.prune_rewire && std::isfinite(c_i)) options.prune_above = c_i;
    const VertexId seeds[] = {*added};
    global_rewire(tree_, problem_, seeds, radius_, options, &graph_);
  }
  ++iterations_;

  const double before = best_cost_;
  refresh_best_cost();
  record(best_cost_ < before);
  return true;
}

PlannerMetrics Planner::run() {
  while (step()) {
  }
  record(true);
  return metrics();
}

PlannerMetrics Planner::metrics() const {
  PlannerMetrics m;
  m.rows = rows_;
  m.best_cost = best_cost_;
  m.iterations = iterations_;
  m.rewires = tree_.rewire_count();
  m.exploit_branch_iterations = exploit_branch_;
  m.exploit_samples = exploit_samples_;
  m.improving_samples = improving_samples_;
  m.vertices = tree_.size();
  if (std::isfinite(best_cost_)) m.solution = extract_path(tree_, problem_.goal);
  return m;
}

PlannerMetrics plan(const Problem& problem, const PlannerConfig& config) {
  Planner planner(problem, config);
  return planner.run();
}

}  // namespace lesplan
