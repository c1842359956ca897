#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "lesplan/environment.hpp"
#include "lesplan/planner.hpp"
#include "test_support.hpp"

using namespace lesplan;
using lesplan::fixture::vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PlannerConfig iterations(SamplerKind sampler, std::uint64_t n, std::uint64_t seed, double eta = 0.4) {
  PlannerConfig cfg;
  cfg.sampler = sampler;
  cfg.eta = eta;
  cfg.iteration_budget = n;
  cfg.seed = seed;
  return cfg;
}

Problem walled_problem() {
  // A wall across the middle with a gap near the top.
  return Problem{fixture::unit_box(2, 10.0), potential_costmap({vec({3.0, 3.0}), vec({7.0, 7.0})}),
                 CollisionModel(0.05, {Box{vec({4.5, 0.0}), vec({5.5, 7.5})}}), vec({1.0, 1.0}),
                 GoalRegion{vec({9.0, 1.0}), 0.05}};
}

}  // namespace

TEST(PlannerConfig, Validation) {
  PlannerConfig cfg;
  EXPECT_THROW(cfg.validate(), ConfigurationError);  // no budget
  cfg.iteration_budget = 10;
  EXPECT_NO_THROW(cfg.validate());
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigurationError);
  cfg.delta = 1e-4;
  cfg.goal_bias = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigurationError);
  EXPECT_EQ(parse_sampler("relevant"), SamplerKind::relevant);
  EXPECT_THROW(parse_sampler("rrt"), ConfigurationError);
}

TEST(BestSolutionCost, Examples) {
  const GoalRegion goal{vec({9.0, 9.0}), 0.5};
  Tree tree(vec({1.0, 1.0}));
  EXPECT_EQ(best_solution_cost(tree, goal), kInf);
  EXPECT_THROW(extract_path(tree, goal), NoSolutionError);
  const VertexId a = tree.add_vertex(vec({5.0, 5.0}), tree.root(), 6.0);
  tree.add_vertex(vec({9.2, 9.0}), a, 7.0);
  const VertexId c = tree.add_vertex(vec({9.0, 9.3}), tree.root(), 11.5);
  EXPECT_DOUBLE_EQ(best_solution_cost(tree, goal), 11.5);
  const auto path = extract_path(tree, goal);
  ASSERT_EQ(path.size(), 2u);
  EXPECT_TRUE(path.back().isApprox(tree.state(c)));
}

TEST(Planner, NoExploitationWithZeroProbability) {
  auto cfg = iterations(SamplerKind::les, 3000, 1);
  cfg.p_les = 0.0;
  const auto m = plan(potential_preset(2).problem, cfg);
  ASSERT_TRUE(std::isfinite(m.best_cost));
  EXPECT_EQ(m.exploit_branch_iterations, 0u);
  EXPECT_EQ(m.exploit_samples, 0u);
}

TEST(Planner, NoExploitationBeforeFirstSolution) {
  Planner planner(potential_preset(2).problem, iterations(SamplerKind::les, 4000, 2));
  std::uint64_t unsolved = 0;
  while (!std::isfinite(planner.best_cost()) && planner.step()) {
    ++unsolved;
    EXPECT_EQ(planner.metrics().exploit_branch_iterations, 0u);
  }
  EXPECT_GT(unsolved, 10u);
  ASSERT_TRUE(std::isfinite(planner.best_cost()));
}

TEST(Planner, ExploitBranchFrequencyMatchesProbability) {
  Planner planner(potential_preset(2).problem, iterations(SamplerKind::les, 6000, 3));
  std::uint64_t solved_iterations = 0;
  while (true) {
    const bool had_solution = std::isfinite(planner.best_cost());
    if (!planner.step()) break;
    if (had_solution) ++solved_iterations;
  }
  ASSERT_GT(solved_iterations, 3000u);
  const auto m = planner.metrics();
  EXPECT_NEAR(double(m.exploit_branch_iterations) / double(solved_iterations), 0.5, 0.02);
  EXPECT_GT(m.exploit_samples, m.exploit_branch_iterations / 2);
}

TEST(Planner, DeterministicForFixedSeed) {
  for (SamplerKind s : {SamplerKind::les, SamplerKind::informed, SamplerKind::relevant, SamplerKind::uniform}) {
    const auto cfg = iterations(s, 1500, 7);
    Planner a(potential_preset(2).problem, cfg);
    Planner b(potential_preset(2).problem, cfg);
    a.run();
    b.run();
    ASSERT_EQ(a.tree().size(), b.tree().size()) << to_string(s);
    for (std::size_t k = 0; k < a.tree().size(); ++k) {
      EXPECT_EQ(a.tree().state(vertex_id(k)), b.tree().state(vertex_id(k)));
      EXPECT_EQ(a.tree().parent(vertex_id(k)), b.tree().parent(vertex_id(k)));
    }
    const auto ma = a.metrics(), mb = b.metrics();
    ASSERT_EQ(ma.rows.size(), mb.rows.size());
    for (std::size_t k = 0; k < ma.rows.size(); ++k) {
      EXPECT_EQ(ma.rows[k].elapsed_s, mb.rows[k].elapsed_s);
      EXPECT_EQ(ma.rows[k].best_cost, mb.rows[k].best_cost);
      EXPECT_EQ(ma.rows[k].rewires, mb.rows[k].rewires);
    }
  }
}

TEST(Planner, MetricsAreMonotone) {
  for (SamplerKind s : {SamplerKind::les, SamplerKind::relevant}) {
    const auto m = plan(potential_preset(2).problem, iterations(s, 3000, 8));
    ASSERT_GE(m.rows.size(), 2u);
    EXPECT_EQ(m.rows.front().elapsed_s, 0.0);
    for (std::size_t k = 1; k < m.rows.size(); ++k) {
      EXPECT_GT(m.rows[k].elapsed_s, m.rows[k - 1].elapsed_s);
      EXPECT_LE(m.rows[k].best_cost, m.rows[k - 1].best_cost);
      EXPECT_GE(m.rows[k].rewires, m.rows[k - 1].rewires);
      EXPECT_GE(m.rows[k].iterations, m.rows[k - 1].iterations);
    }
    EXPECT_EQ(m.rows.back().iterations, 3000u);
    EXPECT_EQ(m.rows.back().best_cost, m.best_cost);
  }
}

TEST(Planner, SolutionPathCostAndCollisionFreedom) {
  const Problem p = walled_problem();
  for (SamplerKind s : {SamplerKind::les, SamplerKind::informed, SamplerKind::relevant}) {
    Planner planner(p, iterations(s, 4000, 9, 0.5));
    const auto m = planner.run();
    ASSERT_TRUE(std::isfinite(m.best_cost)) << to_string(s);
    ASSERT_GE(m.solution.size(), 2u);
    EXPECT_TRUE(m.solution.front().isApprox(p.start));
    EXPECT_TRUE(p.goal.contains(m.solution.back()));
    double cost = 0.0;
    for (std::size_t k = 1; k < m.solution.size(); ++k) {
      cost += p.edge_cost(m.solution[k - 1], m.solution[k]);
      EXPECT_TRUE(p.segment_free(m.solution[k - 1], m.solution[k]));
    }
    EXPECT_NEAR(cost, m.best_cost, 1e-9 * m.best_cost);
    // Every tree edge is collision-free and g is consistent.
    const Tree& tree = planner.tree();
    for (std::size_t k = 1; k < tree.size(); ++k) {
      const VertexId v = vertex_id(k);
      EXPECT_TRUE(p.collision.is_free(tree.state(v)));
      EXPECT_TRUE(p.segment_free(tree.state(tree.parent(v)), tree.state(v)));
      EXPECT_NEAR(tree.g(v), fixture::recomputed_g(tree, v), 1e-9 * std::max(1.0, tree.g(v)));
    }
  }
}

TEST(Planner, TimeBudgetStops) {
  PlannerConfig cfg;
  cfg.time_budget = 0.2;
  cfg.seed = 4;
  const auto m = plan(potential_preset(2).problem, cfg);
  EXPECT_GT(m.iterations, 0u);
  EXPECT_GE(m.rows.back().elapsed_s, 0.2);
  EXPECT_LT(m.rows.back().elapsed_s, 1.0);
}

TEST(Planner, DiagnosticsStream) {
  Planner planner(potential_preset(2).problem, iterations(SamplerKind::les, 2000, 5));
  std::ostringstream diag;
  planner.set_diagnostics(&diag);
  const auto m = planner.run();
  std::istringstream in(diag.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,vertex,subset_size,gamma,improved");
  std::uint64_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, m.exploit_samples);
}

TEST(Planner, RejectsStartInCollision) {
  Problem p = walled_problem();
  p.start = vec({5.0, 1.0});
  EXPECT_THROW(Planner(p, iterations(SamplerKind::les, 10, 1)), ConfigurationError);
}
