#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lesplan/nearest_index.hpp"
#include "lesplan/space.hpp"

namespace lesplan {

/// Dense, never-reused vertex handle.
enum class VertexId : std::uint32_t {};

constexpr std::size_t index_of(VertexId id) { return static_cast<std::size_t>(id); }
constexpr VertexId vertex_id(std::size_t index) { return static_cast<VertexId>(index); }

struct Vertex {
  StateVector state;
  VertexId parent{};
  std::vector<VertexId> children;  // kept sorted by id
  double g = 0.0;                  // cost-to-come
  double edge_cost_to_parent = 0.0;
  double cost_to_go = 0.0;         // heuristic to the goal center, 0 without a target
  std::uint64_t selection_count = 0;
};

/// Vertices whose cost-to-come or child set changed since the last drain.
/// `overflowed` means entries were dropped and the consumer must rescan.
struct ChangeLog {
  std::vector<VertexId> vertices;
  bool overflowed = false;
};

/// Rooted spanning tree with cached cost-to-come and an exact nearest-neighbor
/// index over vertex states.
///
/// Invariants kept after every mutation: g(root) = 0, parent(root) = root,
/// g(v) = g(parent(v)) + edge_cost_to_parent(v), and every non-root vertex is
/// listed in exactly one children set.
class Tree {
 public:
  explicit Tree(StateVector root_state, std::optional<StateVector> heuristic_target = std::nullopt);

  VertexId root() const { return VertexId{0}; }
  std::size_t size() const { return vertices_.size(); }
  int dimension() const { return index_.dimension(); }
  bool contains(VertexId v) const { return index_of(v) < vertices_.size(); }

  const Vertex& vertex(VertexId v) const;
  const StateVector& state(VertexId v) const { return vertex(v).state; }
  double g(VertexId v) const { return vertex(v).g; }
  VertexId parent(VertexId v) const { return vertex(v).parent; }
  std::span<const VertexId> children(VertexId v) const { return vertex(v).children; }
  std::size_t child_count(VertexId v) const { return vertex(v).children.size(); }
  bool is_leaf(VertexId v) const { return vertex(v).children.empty(); }
  double cost_to_go(VertexId v) const { return vertex(v).cost_to_go; }
  bool is_child(VertexId parent, VertexId child) const;

  VertexId add_vertex(StateVector state, VertexId parent, double edge_cost);

  /// Re-parents `v` under `new_parent`, shifting g of v and all its descendants
  /// by the same improvement. Returns the improvement (> 0). Vertices whose g
  /// changed are appended to `shifted` when given.
  double rewire(VertexId v, VertexId new_parent, double new_edge_cost, std::vector<VertexId>* shifted = nullptr);

  /// True when `ancestor` lies on the tree path from `v` to the root (v included).
  bool is_ancestor(VertexId ancestor, VertexId v) const;

  /// Exact number of descendants by full subtree traversal.
  std::size_t descendant_count(VertexId v) const;

  /// n_v + sum of n_u over `subset`, a subset of children(v).
  std::size_t dhat(VertexId v, std::span<const VertexId> subset) const;

  VertexId nearest(const StateVector& x) const;
  std::vector<VertexId> near(const StateVector& x, double radius) const;
  /// Same set as near() without the distance ordering; cheaper for sweeps.
  std::vector<VertexId> near_unordered(const StateVector& x, double radius) const;
  /// Superset of the vertices u within `radius` of x with g(u) > base + slope |u - x|,
  /// in deterministic traversal order. Relies on cost-to-come never increasing.
  std::vector<VertexId> near_above(const StateVector& x, double radius, double base, double slope) const;

  void increment_selection(VertexId v);
  std::uint64_t rewire_count() const { return rewires_; }

  /// Drains the change journal (added vertices, their parents, rewired subtrees).
  ChangeLog take_changes();

 private:
  Vertex& mutable_vertex(VertexId v);
  void journal(VertexId v);

  std::vector<Vertex> vertices_;
  NearestIndex index_;
  std::optional<StateVector> heuristic_target_;
  std::uint64_t rewires_ = 0;
  ChangeLog changes_;
};

}  // namespace lesplan
