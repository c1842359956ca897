#pragma once

#include <Eigen/Core>

#include <optional>
#include <random>

#include "lesplan/les_sampler.hpp"
#include "lesplan/space.hpp"
#include "lesplan/tree.hpp"

namespace lesplan {

/// Geometry of the prolate hyperspheroid {x : |x - x_s| + |x - x_g| <= c}.
class InformedFrame {
 public:
  InformedFrame(StateVector start, StateVector goal);

  const StateVector& start() const { return start_; }
  const StateVector& goal() const { return goal_; }
  const StateVector& center() const { return center_; }
  double min_cost() const { return c_min_; }
  /// Orthonormal; first column is the unit transverse axis (goal - start).
  const Eigen::MatrixXd& rotation() const { return rotation_; }

  /// Uniform sample of the spheroid with transverse diameter `c`, ignoring bounds.
  StateVector sample_spheroid(double c, RandomStream& rng) const;

 private:
  StateVector start_;
  StateVector goal_;
  StateVector center_;
  double c_min_;
  Eigen::MatrixXd rotation_;
};

/// Uniform-in-bounds for an infinite c_i, otherwise uniform in the informed set
/// intersected with the bounds (100 redraws, then uniform-in-bounds).
StateVector informed_sample(const InformedFrame& frame, double c_i, const SearchSpace& space, RandomStream& rng);

/// Relevant Region baseline: pick a vertex like LES, then rejection-sample its
/// epsilon-ball for f_v(x) < c_i with at most 20 draws.
std::optional<StateVector> relevant_region_sample(Tree& tree, RelevantQueue& queue, const Problem& problem, double c_i,
                                                  const LesParams& params, RandomStream& rng);

/// With probability `bias` returns the goal center, else delegates.
template <class Inner>
StateVector goal_biased(Inner&& inner, const GoalRegion& goal, double bias, RandomStream& rng) {
  if (!(bias >= 0.0 && bias <= 1.0)) throw ContractViolation("goal bias must lie in [0, 1]");
  std::bernoulli_distribution take_goal(bias);
  if (take_goal(rng)) return goal.center;
  return inner();
}

}  // namespace lesplan
