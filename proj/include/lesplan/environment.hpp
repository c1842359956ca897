#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lesplan/space.hpp"
#include "lesplan/tree.hpp"

namespace lesplan {

/// A parsed environment file plus a display name.
///
/// File schema:
///   {"dimension": d, "lower": [...], "upper": [...],
///    "cost": {"kind": "constant"|"potential", "centers": [[...], ...]},
///    "obstacles": [{"lower": [...], "upper": [...]}, ...],
///    "start": [...], "goal": [...], "goal_radius": r, "resolution": lambda}
/// Optional keys: "name", and "eta" (the planner range the preset was tuned for).
/// "goal_radius" defaults to the resolution.
struct EnvironmentSpec {
  std::string name;
  Problem problem;
  std::optional<double> eta;
};

EnvironmentSpec parse_environment(const nlohmann::json& doc);
EnvironmentSpec load_environment(const std::filesystem::path& path);
nlohmann::json to_json(const EnvironmentSpec& env);

/// C(x) = 1 + 9 * sum_i exp(-|x - c_i|^2).
CostField potential_costmap(std::vector<StateVector> centers);

/// 2^ceil(d/2) high-cost centers on a symmetric lattice around the start-goal
/// midpoint. Each lattice axis lives in a coordinate pair and is orthogonal to
/// the start-goal diagonal; every center sits at unit distance from the midpoint.
std::vector<StateVector> lattice_centers(const StateVector& start, const StateVector& goal);

/// Potential cost-map presets on [0, 10]^d with start (1,...,1) and goal
/// (9,...,9). Supported: d = 2 (eta 0.4), 4 (eta 0.6), 6 (eta 1.5).
EnvironmentSpec potential_preset(int dimension);

/// Snapshot {"root": id, "vertices": [{"id", "state", "parent", "g"}, ...]}.
nlohmann::json tree_to_json(const Tree& tree);

nlohmann::json path_to_json(const std::vector<StateVector>& path);

}  // namespace lesplan
