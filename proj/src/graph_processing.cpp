#include "lesplan/graph_processing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace lesplan {

double unit_ball_volume(int d) {
  if (d < 0) throw ContractViolation("negative dimension");
  const double half = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double connection_radius(std::size_t n, double eta, const SearchSpace& space) {
  if (n < 1) throw ContractViolation("connection_radius needs at least one vertex");
  if (!(eta > 0.0)) throw ContractViolation("range must be positive");
  // log(1) = 0 would collapse the radius; a lone root connects at full range.
  if (n == 1) return eta;
  const int d = space.dimension();
  const double inv_d = 1.0 / static_cast<double>(d);
  const double gamma = 2.0 * std::pow(1.0 + inv_d, inv_d) * std::pow(space.measure() / unit_ball_volume(d), inv_d);
  const double nn = static_cast<double>(n);
  return std::min(eta, gamma * std::pow(std::log(nn) / nn, inv_d));
}

StateVector steer(const StateVector& from, const StateVector& target, double eta) {
  const StateVector diff = target - from;
  const double dist = diff.norm();
  if (dist <= eta) return target;
  return from + (eta / dist) * diff;
}

void NeighborGraph::connect(VertexId v, std::span<const VertexId> near) {
  const std::size_t needed = std::max(index_of(v), near.empty() ? 0 : index_of(*std::max_element(near.begin(), near.end()))) + 1;
  if (adjacency_.size() < needed) adjacency_.resize(needed);
  for (VertexId u : near) {
    if (u == v) continue;
    adjacency_[index_of(v)].push_back(u);
    adjacency_[index_of(u)].push_back(v);
    ++edges_;
  }
}

std::span<const VertexId> NeighborGraph::neighbors(VertexId v) const {
  if (index_of(v) >= adjacency_.size()) return {};
  return adjacency_[index_of(v)];
}

std::optional<VertexId> local_extend_connect(Tree& tree, const Problem& problem, const StateVector& x_rand, double eta,
                                             double radius, NeighborGraph* graph) {
  const VertexId nearest = tree.nearest(x_rand);
  StateVector x = steer(tree.state(nearest), x_rand, eta);
  if (!problem.space.contains(x) || !problem.collision.is_free(x)) return std::nullopt;
  if ((x - tree.state(nearest)).norm() == 0.0) return std::nullopt;

  std::vector<VertexId> candidates = tree.near_unordered(x, radius);
  const std::size_t within_radius = candidates.size();
  if (std::find(candidates.begin(), candidates.end(), nearest) == candidates.end()) candidates.push_back(nearest);

  // Branch and bound over g(p) + lb * |p - x|, a lower bound of g(p) + c(p, x).
  // Produces the same parent as ranking every candidate by (g + c, id).
  const double lb = problem.cost.lower_bound() * (1.0 - 1e-12);
  std::vector<std::pair<double, VertexId>> ranked;
  ranked.reserve(candidates.size());
  for (VertexId p : candidates) ranked.emplace_back(tree.g(p) + lb * (tree.state(p) - x).norm(), p);
  std::sort(ranked.begin(), ranked.end());

  std::optional<std::tuple<double, VertexId, double>> best;
  for (const auto& [bound, p] : ranked) {
    if (best && bound > std::get<0>(*best)) break;
    const double c = problem.edge_cost(tree.state(p), x);
    const std::tuple<double, VertexId, double> entry{tree.g(p) + c, p, c};
    if (best && !(entry < *best)) continue;
    if (problem.segment_free(tree.state(p), x)) best = entry;
  }
  if (!best) return std::nullopt;
  const VertexId added = tree.add_vertex(std::move(x), std::get<1>(*best), std::get<2>(*best));
  if (graph) graph->connect(added, std::span<const VertexId>(candidates.data(), within_radius));
  return added;
}

namespace {

struct EdgeEval {
  std::optional<double> cost;
  std::optional<bool> free;
};

struct QueueEntry {
  double key;
  VertexId id;
  double g;
  bool operator>(const QueueEntry& o) const {
    if (key != o.key) return key > o.key;
    return id > o.id;
  }
};

}  // namespace

std::size_t global_rewire(Tree& tree, const Problem& problem, std::span<const VertexId> seeds, double radius,
                          const RewireOptions& options, const NeighborGraph* graph) {
  // Costs are symmetric, so one memo entry serves both directions of a pair.
  std::unordered_map<std::uint64_t, EdgeEval> memo;
  const auto pair_key = [](VertexId a, VertexId b) {
    auto lo = static_cast<std::uint64_t>(std::min(a, b));
    auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  const auto push = [&](VertexId v) { queue.push({tree.g(v) + tree.cost_to_go(v), v, tree.g(v)}); };
  for (VertexId s : seeds) push(s);

  // c(v, u) >= lb |v - u|, which rules out most neighbors without integrating.
  const double lb = problem.cost.lower_bound() * (1.0 - 1e-12);

  std::size_t rewires = 0;
  std::size_t pops = 0;
  std::vector<VertexId> shifted;
  while (!queue.empty() && pops < options.budget) {
    const QueueEntry top = queue.top();
    queue.pop();
    if (top.g != tree.g(top.id)) continue;  // superseded by a later push
    ++pops;
    const VertexId v = top.id;
    if (options.prune_above && !(top.key < *options.prune_above)) continue;

    const StateVector state_v = tree.state(v);
    std::vector<VertexId> queried;
    if (!graph) queried = tree.near_above(state_v, radius, tree.g(v), lb);
    const std::span<const VertexId> neighbors = graph ? graph->neighbors(v) : std::span<const VertexId>(queried);
    for (VertexId u : neighbors) {
      if (u == v || u == tree.root()) continue;
      if (!(tree.g(v) + lb * (tree.state(u) - state_v).norm() < tree.g(u) - 1e-12)) continue;
      EdgeEval& edge = memo[pair_key(v, u)];
      if (!edge.cost) edge.cost = problem.edge_cost(state_v, tree.state(u));
      if (!(tree.g(v) + *edge.cost < tree.g(u) - 1e-12)) continue;
      if (tree.is_ancestor(u, v)) continue;
      if (!edge.free) edge.free = problem.segment_free(state_v, tree.state(u));
      if (!*edge.free) continue;
      shifted.clear();
      tree.rewire(u, v, *edge.cost, &shifted);
      ++rewires;
      for (VertexId w : shifted) push(w);
    }
  }
  return rewires;
}

}  // namespace lesplan
