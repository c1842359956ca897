#include "lesplan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lesplan/errors.hpp"

namespace lesplan::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ContractViolation("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw ContractViolation("median of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

RankTest mann_whitney_less(std::span<const double> smaller, std::span<const double> larger) {
  const std::size_t n1 = smaller.size();
  const std::size_t n2 = larger.size();
  if (n1 == 0 || n2 == 0) throw ContractViolation("rank test needs two non-empty samples");

  struct Item {
    double value;
    int group;
  };
  std::vector<Item> all;
  for (double x : smaller) all.push_back({x, 0});
  for (double x : larger) all.push_back({x, 1});
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  const double n = static_cast<double>(n1 + n2);
  double rank_sum = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].group == 0) rank_sum += avg_rank;
    }
    i = j;
  }

  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  RankTest out;
  out.u = rank_sum - a * (a + 1.0) / 2.0;
  const double mu = a * b / 2.0;
  const double var = a * b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    out.z = 0.0;
    out.p_value = 1.0;
    return out;
  }
  // Small U supports H1; +0.5 is the continuity correction toward the null.
  out.z = (out.u - mu + 0.5) / std::sqrt(var);
  out.p_value = 0.5 * std::erfc(-out.z / std::sqrt(2.0));
  return out;
}

}  // namespace lesplan::stats
