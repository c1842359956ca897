#pragma once

#include <span>

namespace lesplan::stats {

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> xs);

struct RankTest {
  double u = 0.0;        // Mann-Whitney U of the first sample
  double z = 0.0;        // tie-corrected normal score with continuity correction
  double p_value = 1.0;  // one-sided p for "first sample tends to be smaller"
};

/// One-sided Mann-Whitney U test of H1: values in `smaller` are stochastically
/// less than values in `larger`. Infinite values rank as the largest ties.
RankTest mann_whitney_less(std::span<const double> smaller, std::span<const double> larger);

}  // namespace lesplan::stats
