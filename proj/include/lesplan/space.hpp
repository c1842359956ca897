#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string_view>
#include <vector>

#include "lesplan/errors.hpp"

namespace lesplan {

using StateVector = Eigen::VectorXd;
using RandomStream = std::mt19937_64;

/// Axis-aligned bounding box of the search space.
class SearchSpace {
 public:
  SearchSpace(StateVector lower, StateVector upper);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const StateVector& lower() const { return lower_; }
  const StateVector& upper() const { return upper_; }

  /// Lebesgue measure of the box.
  double measure() const;

  bool contains(const StateVector& x) const;
  void require_contains(const StateVector& x) const;

 private:
  StateVector lower_;
  StateVector upper_;
};

enum class CostKind { constant, potential, custom };

std::string_view to_string(CostKind kind);

/// Continuous state cost C(x) >= 0 that defines the integral-cost metric.
///
/// The potential kind is C(x) = 1 + 9 * sum_i exp(-|x - c_i|^2). Segment
/// integrals for it are evaluated from the closed-form squared distance along
/// the segment, so no temporaries are allocated per quadrature node.
class CostField {
 public:
  static CostField constant(double value = 1.0);
  static CostField potential(std::vector<StateVector> centers);
  static CostField custom(std::function<double(const StateVector&)> evaluator);

  CostKind kind() const { return kind_; }
  double constant_value() const { return constant_; }
  const std::vector<StateVector>& centers() const { return centers_; }
  /// Global lower bound on C; 0 for custom fields. Edge costs are at least
  /// this bound times the segment length.
  double lower_bound() const;

  /// Unchecked evaluation. Use state_cost() for the bounds-checked variant.
  double operator()(const StateVector& x) const;

  /// Composite trapezoid mean of C over the segment a->b with `intervals`
  /// equal sub-intervals (intervals + 1 nodes).
  double segment_mean(const StateVector& a, const StateVector& b, std::int64_t intervals) const;

 private:
  CostField() = default;

  CostKind kind_ = CostKind::constant;
  double constant_ = 1.0;
  std::vector<StateVector> centers_;
  std::shared_ptr<const std::function<double(const StateVector&)>> evaluator_;
};

/// Bounds-checked C(x); throws DomainError outside `space`.
double state_cost(const CostField& field, const SearchSpace& space, const StateVector& x);

/// Number of quadrature / collision sub-intervals for a segment of `length`.
std::int64_t segment_intervals(double length, double resolution);

/// Straight-line integral cost |u - v| * mean(C) using ceil(|u-v|/resolution)+1
/// trapezoid nodes. Exactly symmetric in (u, v).
double edge_cost(const CostField& field, const StateVector& u, const StateVector& v, double resolution);

/// Euclidean distance. A consistent under-estimate of edge_cost only when C >= 1.
double heuristic(const StateVector& a, const StateVector& b);

struct Box {
  StateVector lower;
  StateVector upper;

  /// Open interior; the boundary belongs to free space.
  bool contains_interior(const StateVector& x) const;
};

/// Black-box point validity plus the resolution used to discretize segments.
class CollisionModel {
 public:
  explicit CollisionModel(double resolution, std::vector<Box> obstacles = {});
  CollisionModel(double resolution, std::function<bool(const StateVector&)> is_free);

  double resolution() const { return resolution_; }
  const std::vector<Box>& obstacles() const { return obstacles_; }

  bool is_free(const StateVector& x) const;

 private:
  double resolution_;
  std::vector<Box> obstacles_;
  std::shared_ptr<const std::function<bool(const StateVector&)>> predicate_;
};

/// Checks ceil(|u-v|/resolution)+1 evenly spaced states: endpoints first, then
/// bisection order so that obstructed segments fail early. Obstacles thinner
/// than the resolution can be missed.
bool is_segment_free(const CollisionModel& model, const StateVector& u, const StateVector& v);

/// Euclidean ball around the goal state.
struct GoalRegion {
  StateVector center;
  double radius = 0.0;

  bool contains(const StateVector& x) const;
};

/// Bundles everything that defines a planning query.
struct Problem {
  SearchSpace space;
  CostField cost;
  CollisionModel collision;
  StateVector start;
  GoalRegion goal;

  int dimension() const { return space.dimension(); }
  double resolution() const { return collision.resolution(); }
  double edge_cost(const StateVector& u, const StateVector& v) const {
    return lesplan::edge_cost(cost, u, v, collision.resolution());
  }
  bool segment_free(const StateVector& u, const StateVector& v) const {
    return is_segment_free(collision, u, v);
  }
  /// Throws ConfigurationError when start/goal are unusable.
  void validate() const;
};

inline void require_same_dimension(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw ContractViolation("state dimension mismatch");
}

/// Each coordinate independently uniform in [lower, upper].
template <class Rng>
StateVector sample_uniform(const SearchSpace& space, Rng& rng) {
  StateVector x(space.dimension());
  for (int i = 0; i < space.dimension(); ++i) {
    std::uniform_real_distribution<double> axis(space.lower()[i], space.upper()[i]);
    x[i] = axis(rng);
  }
  return x;
}

/// Uniform draw from the open interval (0, 1).
double open_unit(RandomStream& rng);

/// Uniform draw from the open Euclidean ball of `radius` around `center`
/// (Gaussian direction scaled by radius * u^(1/d)).
StateVector sample_ball(const StateVector& center, double radius, RandomStream& rng);

}  // namespace lesplan
