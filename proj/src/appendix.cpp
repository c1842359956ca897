#include "lesplan/appendix.hpp"

#include <cmath>

namespace lesplan {

double improvement_probability_bound(int dimension, double ratio) {
  if (dimension < 0) throw ContractViolation("negative dimension");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ContractViolation("ratio must lie in (0, 1]");
  return std::pow(1.0 - ratio * ratio / 4.0, 0.5 * static_cast<double>(dimension));
}

double covering_radius(double epsilon, double origin_norm) {
  if (!(epsilon > 0.0) || !(origin_norm > 0.0) || epsilon > origin_norm) {
    throw ContractViolation("covering radius needs 0 < epsilon <= |x_o|");
  }
  return epsilon * std::sqrt(1.0 - epsilon * epsilon / (4.0 * origin_norm * origin_norm));
}

AppendixResult appendix_verify(int dimension, double ratio, std::size_t samples, RandomStream& rng) {
  if (dimension < 1) throw ContractViolation("dimension must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ContractViolation("ratio must lie in (0, 1)");
  if (samples < 10000) throw ContractViolation("appendix check needs at least 10^4 samples");

  const StateVector origin = StateVector::Unit(dimension, 0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (sample_ball(origin, ratio, rng).squaredNorm() < 1.0) ++hits;
  }

  AppendixResult r;
  r.dimension = dimension;
  r.ratio = ratio;
  r.samples = samples;
  r.empirical_p = static_cast<double>(hits) / static_cast<double>(samples);
  r.sigma = std::sqrt(r.empirical_p * (1.0 - r.empirical_p) / static_cast<double>(samples));
  r.bound = improvement_probability_bound(dimension, ratio);
  r.r_c = covering_radius(ratio, 1.0);
  r.within_bound = r.empirical_p < r.bound + 3.0 * r.sigma;
  return r;
}

}  // namespace lesplan
