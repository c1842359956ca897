#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lesplan/space.hpp"
#include "lesplan/tree.hpp"

namespace lesplan {

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// min(eta, gamma_d (log n / n)^(1/d)),
/// gamma_d = 2 (1 + 1/d)^(1/d) (mu(space) / zeta_d)^(1/d).
double connection_radius(std::size_t n, double eta, const SearchSpace& space);

/// Pulls `target` to distance at most `eta` from `from` along their segment.
StateVector steer(const StateVector& from, const StateVector& target, double eta);

/// Undirected near-neighbor graph recorded as vertices are added. Each pair is
/// stored once per endpoint when the later vertex was within the connection
/// radius at its insertion, so sweeps can skip spatial queries.
class NeighborGraph {
 public:
  void connect(VertexId v, std::span<const VertexId> near);
  std::span<const VertexId> neighbors(VertexId v) const;
  std::size_t edge_count() const { return edges_; }

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edges_ = 0;
};

/// Extension step: steer toward the nearest vertex, then attach to the member of
/// near(x, radius) plus the nearest vertex that minimizes g(p) + c(p, x) over
/// collision-free connections. Returns nullopt when the steered state is in
/// collision, duplicates a vertex, or nothing connects. When `graph` is given
/// the new vertex is connected to its near set there.
std::optional<VertexId> local_extend_connect(Tree& tree, const Problem& problem, const StateVector& x_rand, double eta,
                                             double radius, NeighborGraph* graph = nullptr);

struct RewireOptions {
  std::size_t budget = std::numeric_limits<std::size_t>::max();  // max queue pops per sweep
  /// When set, only vertices with g + h < bound are expanded.
  std::optional<double> prune_above;
};

/// Value-iteration sweep in increasing g + h order starting from `seeds`.
/// A neighbor u of a popped v is re-parented when g(v) + c(v, u) < g(u) - 1e-12;
/// every vertex whose cost-to-come dropped is re-queued. Returns the number of
/// parent changes. Neighbors come from `graph` when given, otherwise from a
/// radius query around each popped vertex.
std::size_t global_rewire(Tree& tree, const Problem& problem, std::span<const VertexId> seeds, double radius,
                          const RewireOptions& options = {}, const NeighborGraph* graph = nullptr);

}  // namespace lesplan
