#include "lesplan/samplers.hpp"

#include <cmath>
#include <utility>

namespace lesplan {

namespace {

// Gram-Schmidt of {axis, e_0, e_1, ...}, skipping nearly dependent vectors.
Eigen::MatrixXd complete_basis(const StateVector& axis) {
  const auto d = axis.size();
  Eigen::MatrixXd basis(d, d);
  basis.col(0) = axis;
  Eigen::Index filled = 1;
  for (Eigen::Index k = 0; k < d && filled < d; ++k) {
    StateVector candidate = StateVector::Unit(d, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) candidate -= basis.col(j).dot(candidate) * basis.col(j);
    }
    const double norm = candidate.norm();
    if (norm < 1e-6) continue;
    basis.col(filled++) = candidate / norm;
  }
  return basis;
}

}  // namespace

InformedFrame::InformedFrame(StateVector start, StateVector goal)
    : start_(std::move(start)), goal_(std::move(goal)) {
  require_same_dimension(start_, goal_);
  c_min_ = heuristic(start_, goal_);
  if (!(c_min_ > 0.0)) throw ContractViolation("informed frame needs distinct foci");
  center_ = 0.5 * (start_ + goal_);
  rotation_ = complete_basis((goal_ - start_) / c_min_);
}

StateVector InformedFrame::sample_spheroid(double c, RandomStream& rng) const {
  if (c < c_min_) throw ContractViolation("informed sample below the minimum cost");
  const auto d = start_.size();
  const StateVector ball = sample_ball(StateVector::Zero(d), 1.0, rng);
  const double minor = 0.5 * std::sqrt(std::max(0.0, c * c - c_min_ * c_min_));
  StateVector scaled = ball * minor;
  scaled[0] = ball[0] * 0.5 * c;
  return center_ + rotation_ * scaled;
}

StateVector informed_sample(const InformedFrame& frame, double c_i, const SearchSpace& space, RandomStream& rng) {
  if (!std::isfinite(c_i)) return sample_uniform(space, rng);
  if (c_i < frame.min_cost()) throw ContractViolation("informed sample below the minimum cost");
  for (int attempt = 0; attempt < 100; ++attempt) {
    StateVector x = frame.sample_spheroid(c_i, rng);
    if (space.contains(x)) return x;
  }
  return sample_uniform(space, rng);
}

std::optional<StateVector> relevant_region_sample(Tree& tree, RelevantQueue& queue, const Problem& problem, double c_i,
                                                  const LesParams& params, RandomStream& rng) {
  const auto chosen = queue.choose(tree, problem.goal);
  if (!chosen) return std::nullopt;
  const StateVector origin = tree.state(*chosen);
  for (int attempt = 0; attempt < 20; ++attempt) {
    StateVector x = sample_ball(origin, params.epsilon, rng);
    if (!problem.space.contains(x)) continue;
    if (relevant_ball_estimate(tree, problem, *chosen, x) < c_i) return x;
  }
  return std::nullopt;
}

}  // namespace lesplan
