#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "lesplan/space.hpp"
#include "test_support.hpp"

using namespace lesplan;
using lesplan::fixture::vec;

namespace {

// Always returns zero; a legal but degenerate URBG.
struct ZeroEngine {
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return 0; }
};

// Composite Simpson over n (even) intervals of C(u + s (v - u)), written from
// the potential formula directly.
double simpson_potential(const StateVector& center, const StateVector& u, const StateVector& v, int n) {
  const auto c = [&](double s) {
    const StateVector x = u + s * (v - u);
    return 1.0 + 9.0 * std::exp(-(x - center).squaredNorm());
  };
  const double h = 1.0 / n;
  double sum = c(0.0) + c(1.0);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * c(k * h);
  return (u - v).norm() * sum * h / 3.0;
}

}  // namespace

TEST(SearchSpace, RejectsBadBounds) {
  EXPECT_THROW(SearchSpace(vec({0.0}), vec({1.0})), ContractViolation);
  EXPECT_THROW(SearchSpace(vec({0.0, 1.0}), vec({1.0, 1.0})), ContractViolation);
  EXPECT_THROW(SearchSpace(vec({0.0, 0.0}), vec({1.0, 1.0, 1.0})), ContractViolation);
  const SearchSpace s(vec({0.0, -1.0}), vec({2.0, 1.0}));
  EXPECT_DOUBLE_EQ(s.measure(), 4.0);
  EXPECT_TRUE(s.contains(vec({2.0, -1.0})));
  EXPECT_FALSE(s.contains(vec({2.0 + 1e-12, 0.0})));
  EXPECT_FALSE(s.contains(vec({NAN, 0.0})));
}

TEST(StateCost, ConstantIsOne) {
  const auto space = fixture::unit_box(3);
  EXPECT_DOUBLE_EQ(state_cost(CostField::constant(), space, vec({0.2, 0.5, 0.9})), 1.0);
}

TEST(StateCost, PotentialAtCenterIsTen) {
  const auto space = fixture::unit_box(2, 20.0);
  const auto field = CostField::potential({vec({5.0, 5.0})});
  EXPECT_DOUBLE_EQ(state_cost(field, space, vec({5.0, 5.0})), 10.0);
}

TEST(StateCost, PotentialFarAwayIsOne) {
  const auto space = fixture::unit_box(2, 20.0);
  const auto field = CostField::potential({vec({5.0, 5.0})});
  EXPECT_NEAR(state_cost(field, space, vec({15.0, 5.0})), 1.0, 1e-9);
}

TEST(StateCost, OutOfBoundsIsDomainError) {
  const auto space = fixture::unit_box(2);
  EXPECT_THROW(state_cost(CostField::constant(), space, vec({1.5, 0.5})), DomainError);
}

TEST(StateCost, NonNegativeUnderRandomProbing) {
  const auto space = fixture::unit_box(4, 10.0);
  RandomStream rng(3);
  std::vector<StateVector> centers;
  for (int i = 0; i < 5; ++i) centers.push_back(sample_uniform(space, rng));
  const auto field = CostField::potential(centers);
  for (int i = 0; i < 10000; ++i) EXPECT_GE(state_cost(field, space, sample_uniform(space, rng)), 0.0);
}

TEST(EdgeCost, ConstantReducesToLength) {
  EXPECT_DOUBLE_EQ(edge_cost(CostField::constant(), vec({0.0, 0.0}), vec({3.0, 4.0}), 0.1), 5.0);
}

TEST(EdgeCost, ZeroLengthEdge) {
  const auto field = CostField::potential({vec({0.0, 0.0})});
  EXPECT_EQ(edge_cost(field, vec({0.3, 0.4}), vec({0.3, 0.4}), 0.01), 0.0);
}

TEST(EdgeCost, DimensionMismatch) {
  EXPECT_THROW(edge_cost(CostField::constant(), vec({0.0, 0.0}), vec({1.0, 1.0, 1.0}), 0.1), ContractViolation);
}

TEST(EdgeCost, PotentialMatchesFineQuadrature) {
  const StateVector center = vec({0.0, 0.0});
  const auto field = CostField::potential({center});
  const StateVector u = vec({-1.0, 0.0});
  const StateVector v = vec({1.0, 0.0});
  const double oracle = simpson_potential(center, u, v, 100000);
  const double got = edge_cost(field, u, v, 0.01);
  EXPECT_NEAR(got / oracle, 1.0, 1e-4);
  // Off-axis segment too.
  const StateVector a = vec({-0.7, 0.4});
  const StateVector b = vec({1.3, -0.2});
  EXPECT_NEAR(edge_cost(field, a, b, 0.01) / simpson_potential(center, a, b, 100000), 1.0, 1e-4);
}

TEST(EdgeCost, NodeCountFollowsResolution) {
  // A cost that is 1 except in a narrow spike at s = 0.5 is seen only when a
  // node lands on the midpoint: ceil(1/0.5) + 1 = 3 nodes.
  const auto field = CostField::custom([](const StateVector& x) { return std::abs(x[0] - 0.5) < 1e-9 ? 3.0 : 1.0; });
  const double cost = edge_cost(field, vec({0.0, 0.0}), vec({1.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(cost, 0.5 * (0.5 * 1.0 + 3.0 + 0.5 * 1.0));
  EXPECT_EQ(segment_intervals(1.0, 0.3), 4);
  EXPECT_EQ(segment_intervals(0.0, 0.3), 0);
  EXPECT_EQ(segment_intervals(1e-9, 0.3), 1);
}

TEST(EdgeCost, ExactlySymmetric) {
  const auto space = fixture::unit_box(5, 10.0);
  RandomStream rng(11);
  std::vector<StateVector> centers;
  for (int i = 0; i < 4; ++i) centers.push_back(sample_uniform(space, rng));
  const auto field = CostField::potential(centers);
  const auto custom = CostField::custom([](const StateVector& x) { return 1.0 + std::sin(x.sum()) * std::sin(x.sum()); });
  for (int i = 0; i < 2000; ++i) {
    const StateVector u = sample_uniform(space, rng);
    const StateVector v = sample_uniform(space, rng);
    EXPECT_EQ(edge_cost(field, u, v, 0.1), edge_cost(field, v, u, 0.1));
    EXPECT_EQ(edge_cost(custom, u, v, 0.1), edge_cost(custom, v, u, 0.1));
  }
}

TEST(EdgeCost, ConstantMatchesEuclideanEverywhere) {
  const auto space = fixture::unit_box(6, 10.0);
  RandomStream rng(12);
  const auto field = CostField::constant();
  for (int i = 0; i < 10000; ++i) {
    const StateVector u = sample_uniform(space, rng);
    const StateVector v = sample_uniform(space, rng);
    const double d = (u - v).norm();
    EXPECT_NEAR(edge_cost(field, u, v, 0.05), d, 1e-12 * d);
  }
}

TEST(EdgeCost, BoundedBelowByMinimumNodeCost) {
  const auto space = fixture::unit_box(3, 10.0);
  RandomStream rng(13);
  const auto field = CostField::potential({vec({5.0, 5.0, 5.0}), vec({2.0, 7.0, 3.0})});
  const double res = 0.2;
  for (int i = 0; i < 500; ++i) {
    const StateVector u = sample_uniform(space, rng);
    const StateVector v = sample_uniform(space, rng);
    const auto n = segment_intervals((u - v).norm(), res);
    double cmin = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k <= n; ++k) cmin = std::min(cmin, field(u + (v - u) * (double(k) / double(n))));
    EXPECT_GE(edge_cost(field, u, v, res), cmin * (u - v).norm() * (1.0 - 1e-12));
  }
}

TEST(Heuristic, Basics) {
  EXPECT_DOUBLE_EQ(heuristic(vec({0.0, 0.0}), vec({3.0, 4.0})), 5.0);
  EXPECT_EQ(heuristic(vec({0.3, 0.1}), vec({0.3, 0.1})), 0.0);
  EXPECT_THROW(heuristic(vec({0.0, 0.0}), vec({0.0, 0.0, 0.0})), ContractViolation);
}

TEST(Heuristic, TriangleInequality) {
  const auto space = fixture::unit_box(4);
  RandomStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    const StateVector a = sample_uniform(space, rng);
    const StateVector b = sample_uniform(space, rng);
    const StateVector c = sample_uniform(space, rng);
    EXPECT_LE(heuristic(a, c), heuristic(a, b) + heuristic(b, c) + 1e-12);
  }
}

TEST(Heuristic, UnderestimatesEdgeCostWhenCostAtLeastOne) {
  const auto space = fixture::unit_box(3, 10.0);
  RandomStream rng(6);
  const auto field = CostField::potential({vec({5.0, 5.0, 5.0})});
  for (int i = 0; i < 10000; ++i) {
    const StateVector u = sample_uniform(space, rng);
    const StateVector v = sample_uniform(space, rng);
    EXPECT_LE(heuristic(u, v), edge_cost(field, u, v, 0.5) + 1e-9);
  }
}

TEST(Collision, ObstacleFreeAlwaysTrue) {
  const CollisionModel model(0.05);
  RandomStream rng(7);
  const auto space = fixture::unit_box(3);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(is_segment_free(model, sample_uniform(space, rng), sample_uniform(space, rng)));
  }
}

TEST(Collision, EndpointInsideObstacle) {
  const CollisionModel model(0.05, {Box{vec({0.4, 0.4}), vec({0.6, 0.6})}});
  EXPECT_FALSE(is_segment_free(model, vec({0.1, 0.1}), vec({0.5, 0.5})));
  EXPECT_FALSE(is_segment_free(model, vec({0.1, 0.5}), vec({0.9, 0.5})));
  EXPECT_TRUE(is_segment_free(model, vec({0.1, 0.1}), vec({0.9, 0.1})));
  // The closed boundary is free.
  EXPECT_TRUE(model.is_free(vec({0.4, 0.5})));
}

TEST(Collision, ThinObstacleCanBeMissed) {
  // Width 0.02 < resolution / 2 and positioned between quadrature nodes.
  const CollisionModel model(0.1, {Box{vec({0.44, -1.0}), vec({0.46, 2.0})}});
  EXPECT_TRUE(is_segment_free(model, vec({0.0, 0.5}), vec({1.0, 0.5})));
  EXPECT_FALSE(model.is_free(vec({0.45, 0.5})));
}

TEST(Collision, DegenerateSegmentEqualsPointPredicate) {
  const CollisionModel model(0.05, {Box{vec({0.4, 0.4}), vec({0.6, 0.6})}});
  RandomStream rng(8);
  const auto space = fixture::unit_box(2);
  for (int i = 0; i < 2000; ++i) {
    const StateVector x = sample_uniform(space, rng);
    EXPECT_EQ(is_segment_free(model, x, x), model.is_free(x));
  }
}

TEST(Collision, MatchesExhaustiveNodeScan) {
  const CollisionModel model(0.07, {Box{vec({0.3, 0.2}), vec({0.5, 0.4})}, Box{vec({0.6, 0.6}), vec({0.8, 0.9})}});
  RandomStream rng(9);
  const auto space = fixture::unit_box(2);
  for (int i = 0; i < 3000; ++i) {
    const StateVector u = sample_uniform(space, rng);
    const StateVector v = sample_uniform(space, rng);
    const auto n = segment_intervals((u - v).norm(), model.resolution());
    bool free = true;
    for (std::int64_t k = 0; k <= n && free; ++k) {
      free = model.is_free(n == 0 ? u : StateVector(u + (v - u) * (double(k) / double(n))));
    }
    EXPECT_EQ(is_segment_free(model, u, v), free);
  }
}

TEST(SampleUniform, MeanAndBounds) {
  const auto space = fixture::unit_box(3);
  RandomStream rng(10);
  StateVector sum = StateVector::Zero(3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const StateVector x = sample_uniform(space, rng);
    ASSERT_TRUE(space.contains(x));
    sum += x;
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(sum[k] / n, 0.5, 0.01);
}

TEST(SampleUniform, ZeroEngineGivesLowerCorner) {
  const SearchSpace space(vec({-2.0, 3.0}), vec({1.0, 4.0}));
  ZeroEngine engine;
  const StateVector x = sample_uniform(space, engine);
  EXPECT_EQ(x, space.lower());
}

TEST(SampleBall, StrictlyInsideAndRadialLaw) {
  RandomStream rng(14);
  const StateVector c = vec({1.0, 2.0, 3.0, 4.0});
  int inner = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double r = (sample_ball(c, 0.5, rng) - c).norm();
    ASSERT_LT(r, 0.5);
    if (r < 0.25) ++inner;
  }
  // P(r < R/2) = 2^-d.
  EXPECT_NEAR(double(inner) / n, 1.0 / 16.0, 0.006);
}

TEST(Problem, ValidateRejectsBadQueries) {
  auto p = fixture::open_problem(2, 1.0, CostField::constant(), 0.01, vec({0.1, 0.1}), vec({0.9, 0.9}), 0.01);
  EXPECT_NO_THROW(p.validate());
  auto same = p;
  same.goal.center = same.start;
  EXPECT_THROW(same.validate(), ConfigurationError);
  auto outside = p;
  outside.goal.center = vec({1.5, 0.5});
  EXPECT_THROW(outside.validate(), ConfigurationError);
  auto blocked = p;
  blocked.collision = CollisionModel(0.01, {Box{vec({0.0, 0.0}), vec({0.2, 0.2})}});
  EXPECT_THROW(blocked.validate(), ConfigurationError);
}
