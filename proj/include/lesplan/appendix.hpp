#pragma once

#include <cstddef>

#include "lesplan/space.hpp"

namespace lesplan {

/// Monte-Carlo check of the random-local-search bound for J(x) = x'x.
///
/// With x_o at unit distance from the origin and samples uniform in the ball
/// of radius `ratio` around x_o, the fraction landing inside the unit ball is
/// bounded by (1 - ratio^2 / 4)^(d/2).
struct AppendixResult {
  int dimension = 0;
  double ratio = 0.0;
  std::size_t samples = 0;
  double empirical_p = 0.0;
  double sigma = 0.0;  // binomial standard error of empirical_p
  double bound = 0.0;
  double r_c = 0.0;    // radius of the ball covering the improving lens
  bool within_bound = false;  // empirical_p < bound + 3 sigma
};

/// (1 - ratio^2 / 4)^(d/2); ratio is eps / |x_o| in (0, 1].
double improvement_probability_bound(int dimension, double ratio);

/// eps * sqrt(1 - eps^2 / (4 |x_o|^2)).
double covering_radius(double epsilon, double origin_norm);

/// Requires 0 < ratio < 1 and at least 10^4 samples.
AppendixResult appendix_verify(int dimension, double ratio, std::size_t samples, RandomStream& rng);

}  // namespace lesplan
