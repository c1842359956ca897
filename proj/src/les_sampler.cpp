#include "lesplan/les_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lesplan {

LesParams LesParams::for_range(double eta) {
  if (!(eta > 0.0)) throw ContractViolation("range must be positive");
  LesParams p;
  p.epsilon = 1.5 * eta;
  p.fd_step = 1e-6 * eta;
  return p;
}

void LesParams::validate() const {
  if (!(p_les >= 0.0 && p_les <= 1.0)) throw ContractViolation("p_les must lie in [0, 1]");
  if (!(child_keep_prob >= 0.0 && child_keep_prob <= 1.0)) throw ContractViolation("child_keep_prob must lie in [0, 1]");
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(delta > 0.0) || !(delta < epsilon / 10.0)) throw ContractViolation("delta must satisfy 0 < delta < epsilon / 10");
  if (!(fd_step > 0.0) || !(fd_step < delta)) throw ContractViolation("fd_step must satisfy 0 < fd_step < delta");
}

std::vector<VertexId> relevant_vertices(const Tree& tree, double c_i) {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const VertexId v = vertex_id(i);
    if (tree.g(v) + tree.cost_to_go(v) < c_i) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// RelevantQueue

bool RelevantQueue::Before::operator()(const Entry& a, const Entry& b) const {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.id > b.id;  // lower id wins ties
}

bool RelevantQueue::relevant(const Tree& tree, VertexId v) const {
  return tree.g(v) + tree.cost_to_go(v) < c_i_;
}

double RelevantQueue::weight(const Tree& tree, VertexId v) const {
  const Vertex& node = tree.vertex(v);
  const double spread = std::max(c_i_ - best_estimate_, std::numeric_limits<double>::min());
  const double estimate = node.g + node.cost_to_go;
  return std::exp(-(estimate - best_estimate_) / spread) / (1.0 + static_cast<double>(node.selection_count));
}

void RelevantQueue::push(const Tree& tree, VertexId v) {
  const std::size_t i = index_of(v);
  ++versions_[i];
  if (!relevant(tree, v)) return;
  heap_.push_back(Entry{weight(tree, v), v, versions_[i]});
  std::push_heap(heap_.begin(), heap_.end(), Before{});
}

void RelevantQueue::rebuild(const Tree& tree) {
  heap_.clear();
  best_estimate_ = std::numeric_limits<double>::infinity();
  const auto rel = relevant_vertices(tree, c_i_);
  for (VertexId v : rel) best_estimate_ = std::min(best_estimate_, tree.g(v) + tree.cost_to_go(v));
  for (VertexId v : rel) {
    const std::size_t i = index_of(v);
    ++versions_[i];
    heap_.push_back(Entry{weight(tree, v), v, versions_[i]});
  }
  std::make_heap(heap_.begin(), heap_.end(), Before{});
  built_ = true;
}

void RelevantQueue::sync(Tree& tree, double c_i) {
  versions_.resize(tree.size(), 0);
  ChangeLog log = tree.take_changes();
  if (!built_ || c_i != c_i_ || log.overflowed || heap_.size() > 4 * tree.size() + 64) {
    c_i_ = c_i;
    rebuild(tree);
    return;
  }
  std::sort(log.vertices.begin(), log.vertices.end());
  log.vertices.erase(std::unique(log.vertices.begin(), log.vertices.end()), log.vertices.end());
  for (VertexId v : log.vertices) push(tree, v);
}

std::optional<VertexId> RelevantQueue::choose(Tree& tree, const GoalRegion& goal) {
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), Before{});
    const Entry top = heap_.back();
    heap_.pop_back();
    const VertexId v = top.id;
    if (!tree.contains(v) || top.version != versions_[index_of(v)]) continue;
    if (!relevant(tree, v)) continue;
    if (v == tree.root() || tree.is_leaf(v) || goal.contains(tree.state(v))) continue;
    tree.increment_selection(v);
    push(tree, v);
    return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Local objective

LocalObjective::LocalObjective(const Tree& tree, const CostField& field, double resolution, VertexId v,
                               std::span<const VertexId> subset)
    : field_(&field), resolution_(resolution), v_(v) {
  if (v == tree.root()) throw ContractViolation("local objective is undefined for the root");
  parent_state_ = tree.state(tree.parent(v));
  dhat_ = tree.dhat(v, subset);
  children_.reserve(subset.size());
  for (VertexId u : subset) {
    children_.emplace_back(tree.state(u), 1.0 + static_cast<double>(tree.child_count(u)));
  }
}

double LocalObjective::operator()(const StateVector& candidate) const {
  ++evaluations_;
  double total = (1.0 + static_cast<double>(dhat_)) * edge_cost(*field_, parent_state_, candidate, resolution_);
  for (const auto& [state, w] : children_) total += w * edge_cost(*field_, candidate, state, resolution_);
  return total;
}

double jhat(const Tree& tree, const CostField& field, double resolution, VertexId v, const StateVector& candidate,
            std::span<const VertexId> subset) {
  return LocalObjective(tree, field, resolution, v, subset)(candidate);
}

std::vector<VertexId> random_child_subset(const Tree& tree, VertexId v, double keep_prob, RandomStream& rng) {
  const auto kids = tree.children(v);
  if (kids.empty()) throw ContractViolation("random_child_subset: vertex has no children");
  std::bernoulli_distribution keep(keep_prob);
  std::vector<VertexId> subset;
  for (VertexId u : kids) {
    if (keep(rng)) subset.push_back(u);
  }
  if (subset.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, kids.size() - 1);
    subset.push_back(kids[pick(rng)]);
  }
  return subset;
}

std::optional<StateVector> gradient_direction(const LocalObjective& objective, const StateVector& at, double fd_step) {
  StateVector e(at.size());
  StateVector probe = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    probe[i] = at[i] + fd_step;
    const double up = objective(probe);
    probe[i] = at[i] - fd_step;
    const double down = objective(probe);
    probe[i] = at[i];
    e[i] = (up - down) / (2.0 * fd_step);
  }
  const double norm = e.norm();
  if (!(norm >= 1e-12) || !std::isfinite(norm)) return std::nullopt;
  return StateVector(e / norm);
}

double relevant_ball_estimate(const Tree& tree, const Problem& problem, VertexId v, const StateVector& x) {
  return problem.edge_cost(tree.state(v), x) + tree.g(v) + heuristic(x, problem.goal.center);
}

double max_step_size(const Tree& tree, const Problem& problem, VertexId v, const StateVector& ehat, double c_i,
                     const LesParams& params) {
  const StateVector& origin = tree.state(v);
  const SearchSpace& space = problem.space;

  // Distance along -ehat to the bounding box.
  double to_bounds = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < origin.size(); ++i) {
    if (ehat[i] > 0.0) to_bounds = std::min(to_bounds, (origin[i] - space.lower()[i]) / ehat[i]);
    if (ehat[i] < 0.0) to_bounds = std::min(to_bounds, (space.upper()[i] - origin[i]) / -ehat[i]);
  }
  // The relevant ball is open, so stay strictly inside its radius.
  const double limit = std::min(params.epsilon * (1.0 - 1e-9), to_bounds);

  const auto feasible = [&](double gamma) {
    const StateVector x = origin - gamma * ehat;
    return space.contains(x) && relevant_ball_estimate(tree, problem, v, x) < c_i;
  };

  if (limit <= 0.0) return 0.0;
  if (feasible(limit)) return limit;
  if (limit <= params.delta || !feasible(params.delta)) return 0.0;

  double lo = params.delta;
  double hi = limit;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

StepResult step_size(const LocalObjective& objective, const StateVector& at, const StateVector& ehat,
                     double gamma_rel, double delta, RandomStream& rng) {
  const double inv_d = 1.0 / static_cast<double>(at.size());
  StepResult result;
  const double baseline = objective(at);
  result.evaluations = 1;

  double gamma_max = gamma_rel;
  while (gamma_max > delta) {
    const double gamma = std::pow(open_unit(rng), inv_d) * gamma_max;
    ++result.evaluations;
    if (objective(at - gamma * ehat) < baseline) {
      result.gamma = gamma;
      result.improved = true;
      return result;
    }
    gamma_max = gamma;
  }
  // No improvement found above delta; a random step avoids clumping at v.
  result.gamma = std::pow(open_unit(rng), inv_d) * gamma_rel;
  return result;
}

std::optional<StateVector> les_sample(Tree& tree, RelevantQueue& queue, const Problem& problem, double c_i,
                                      const LesParams& params, RandomStream& rng, LesEmission* emission) {
  const auto chosen = queue.choose(tree, problem.goal);
  if (!chosen) return std::nullopt;
  const VertexId v = *chosen;
  const StateVector origin = tree.state(v);

  const auto subset = random_child_subset(tree, v, params.child_keep_prob, rng);
  const LocalObjective objective(tree, problem.cost, problem.resolution(), v, subset);
  const auto ehat = gradient_direction(objective, origin, params.fd_step);
  if (!ehat) return std::nullopt;

  const double gamma_rel = max_step_size(tree, problem, v, *ehat, c_i, params);
  if (gamma_rel <= 0.0) return std::nullopt;

  const StepResult step = step_size(objective, origin, *ehat, gamma_rel, params.delta, rng);
  StateVector x = origin - step.gamma * *ehat;

  // gamma_rel certifies only its own probe; re-check the emitted point.
  if (!((x - origin).norm() < params.epsilon) || !problem.space.contains(x) ||
      !(relevant_ball_estimate(tree, problem, v, x) < c_i)) {
    return std::nullopt;
  }
  if (emission) *emission = LesEmission{v, subset.size(), step.gamma, step.improved, gamma_rel};
  return x;
}

}  // namespace lesplan
