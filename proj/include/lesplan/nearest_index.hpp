#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lesplan/space.hpp"

namespace lesplan {

/// Exact incremental kd-tree over points tagged with dense integer ids.
///
/// Points are appended in insertion order and never removed; the splitting axis
/// cycles with depth. Queries are exact and break distance ties by lower id.
class NearestIndex {
 public:
  using Id = std::uint32_t;

  explicit NearestIndex(int dimension);

  int dimension() const { return dim_; }
  std::size_t size() const { return ids_.size(); }

  /// `value` is an optional per-point key used by within_above(). Callers may
  /// later decrease the true key of a point; the stored one stays an upper bound.
  void insert(const StateVector& point, Id id, double value = 0.0);

  /// (id, distance) of the closest point, or nullopt when empty.
  std::optional<std::pair<Id, double>> nearest(const StateVector& query) const;

  /// All points with distance <= radius, sorted by (distance, id).
  std::vector<std::pair<Id, double>> within(const StateVector& query, double radius) const;
  /// Same set as within(), in deterministic traversal order.
  std::vector<std::pair<Id, double>> within_unordered(const StateVector& query, double radius) const;

  /// Replaces the stored value of point `id` and refreshes the subtree maxima
  /// on its path to the root.
  void set_value(Id id, double value);

  /// Points within `radius` whose stored value exceeds base + slope * distance,
  /// in traversal order. Subtrees whose largest stored value cannot pass the
  /// test are skipped.
  std::vector<std::pair<Id, double>> within_above(const StateVector& query, double radius, double base,
                                                  double slope) const;

 private:
  struct Node {
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;
    int axis = 0;
    double value = 0.0;
    double subtree_max = 0.0;  // largest value stored in this subtree
  };

  double squared_distance(std::size_t node, const StateVector& query) const;
  double coord(std::size_t node, int axis) const { return coords_[node * static_cast<std::size_t>(dim_) + axis]; }

  int dim_;
  std::vector<double> coords_;
  std::vector<Id> ids_;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> node_of_;  // id -> node, -1 when absent
};

}  // namespace lesplan
