#include "lesplan/environment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace lesplan {

namespace {

StateVector read_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigurationError(std::string("environment: '") + what + "' must be an array");
  StateVector x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigurationError(std::string("environment: '") + what + "' holds a non-number");
    x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return x;
}

nlohmann::json write_vector(const StateVector& x) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x[i]);
  return out;
}

void require_dim(const StateVector& x, int d, const char* what) {
  if (x.size() != d) throw ConfigurationError(std::string("environment: '") + what + "' has the wrong dimension");
}

}  // namespace

EnvironmentSpec parse_environment(const nlohmann::json& doc) {
  try {
    const int d = doc.at("dimension").get<int>();
    StateVector lower = read_vector(doc.at("lower"), "lower");
    StateVector upper = read_vector(doc.at("upper"), "upper");
    require_dim(lower, d, "lower");
    require_dim(upper, d, "upper");
    SearchSpace space(lower, upper);

    const auto& cost_doc = doc.at("cost");
    const std::string kind = cost_doc.at("kind").get<std::string>();
    CostField cost = CostField::constant();
    if (kind == "potential") {
      std::vector<StateVector> centers;
      for (const auto& c : cost_doc.at("centers")) {
        centers.push_back(read_vector(c, "centers"));
        require_dim(centers.back(), d, "centers");
      }
      cost = potential_costmap(std::move(centers));
    } else if (kind != "constant") {
      throw ConfigurationError("environment: unknown cost kind '" + kind + "'");
    }

    const double resolution = doc.at("resolution").get<double>();
    std::vector<Box> obstacles;
    if (doc.contains("obstacles")) {
      for (const auto& o : doc.at("obstacles")) {
        Box box{read_vector(o.at("lower"), "obstacles.lower"), read_vector(o.at("upper"), "obstacles.upper")};
        require_dim(box.lower, d, "obstacles.lower");
        require_dim(box.upper, d, "obstacles.upper");
        obstacles.push_back(std::move(box));
      }
    }

    StateVector start = read_vector(doc.at("start"), "start");
    StateVector goal = read_vector(doc.at("goal"), "goal");
    require_dim(start, d, "start");
    require_dim(goal, d, "goal");
    const double goal_radius = doc.contains("goal_radius") ? doc.at("goal_radius").get<double>() : resolution;

    EnvironmentSpec env{
        doc.value("name", std::string("unnamed")),
        Problem{std::move(space), std::move(cost), CollisionModel(resolution, std::move(obstacles)), std::move(start),
                GoalRegion{std::move(goal), goal_radius}},
        std::nullopt,
    };
    if (doc.contains("eta")) env.eta = doc.at("eta").get<double>();
    env.problem.validate();
    return env;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("environment: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ConfigurationError(std::string("environment: ") + e.what());
  }
}

EnvironmentSpec load_environment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open environment file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("environment " + path.string() + ": " + e.what());
  }
  return parse_environment(doc);
}

nlohmann::json to_json(const EnvironmentSpec& env) {
  const Problem& p = env.problem;
  nlohmann::json doc;
  doc["name"] = env.name;
  doc["dimension"] = p.dimension();
  doc["lower"] = write_vector(p.space.lower());
  doc["upper"] = write_vector(p.space.upper());
  nlohmann::json cost;
  if (p.cost.kind() == CostKind::potential) {
    cost["kind"] = "potential";
    cost["centers"] = nlohmann::json::array();
    for (const auto& c : p.cost.centers()) cost["centers"].push_back(write_vector(c));
  } else if (p.cost.kind() == CostKind::constant) {
    cost["kind"] = "constant";
  } else {
    throw ContractViolation("custom cost fields cannot be serialized");
  }
  doc["cost"] = cost;
  doc["obstacles"] = nlohmann::json::array();
  for (const auto& box : p.collision.obstacles()) {
    doc["obstacles"].push_back({{"lower", write_vector(box.lower)}, {"upper", write_vector(box.upper)}});
  }
  doc["start"] = write_vector(p.start);
  doc["goal"] = write_vector(p.goal.center);
  doc["goal_radius"] = p.goal.radius;
  doc["resolution"] = p.resolution();
  if (env.eta) doc["eta"] = *env.eta;
  return doc;
}

CostField potential_costmap(std::vector<StateVector> centers) { return CostField::potential(std::move(centers)); }

std::vector<StateVector> lattice_centers(const StateVector& start, const StateVector& goal) {
  require_same_dimension(start, goal);
  const auto d = start.size();
  const Eigen::Index axes = (d + 1) / 2;
  const StateVector mid = 0.5 * (start + goal);
  const double scale = 1.0 / std::sqrt(static_cast<double>(axes));

  // Axis j pairs coordinates (2j, 2j+1); an odd dimension pairs the last one with 0.
  std::vector<StateVector> dirs;
  for (Eigen::Index j = 0; j < axes; ++j) {
    StateVector w = StateVector::Zero(d);
    const Eigen::Index a = 2 * j;
    const Eigen::Index b = (2 * j + 1 < d) ? 2 * j + 1 : 0;
    w[a] = std::numbers::sqrt2 / 2;
    w[b] -= std::numbers::sqrt2 / 2;
    dirs.push_back(w);
  }

  std::vector<StateVector> centers;
  for (std::size_t mask = 0; mask < (std::size_t{1} << axes); ++mask) {
    StateVector c = mid;
    for (Eigen::Index j = 0; j < axes; ++j) {
      const double sign = (mask >> j) & 1U ? -1.0 : 1.0;
      c += sign * scale * dirs[static_cast<std::size_t>(j)];
    }
    centers.push_back(c);
  }
  return centers;
}

EnvironmentSpec potential_preset(int dimension) {
  double eta = 0.0;
  double resolution = 0.1;
  switch (dimension) {
    case 2:
      eta = 0.4;
      resolution = 0.05;
      break;
    case 4:
      eta = 0.6;
      break;
    case 6:
      eta = 1.5;
      break;
    default:
      throw ConfigurationError("potential presets exist for dimensions 2, 4 and 6");
  }
  const auto d = static_cast<Eigen::Index>(dimension);
  StateVector start = StateVector::Constant(d, 1.0);
  StateVector goal = StateVector::Constant(d, 9.0);
  EnvironmentSpec env{
      "potential-" + std::to_string(dimension) + "d",
      Problem{SearchSpace(StateVector::Zero(d), StateVector::Constant(d, 10.0)),
              potential_costmap(lattice_centers(start, goal)), CollisionModel(resolution), start,
              GoalRegion{goal, resolution}},
      eta,
  };
  return env;
}

nlohmann::json tree_to_json(const Tree& tree) {
  nlohmann::json doc;
  doc["root"] = index_of(tree.root());
  doc["vertices"] = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Vertex& v = tree.vertex(vertex_id(i));
    doc["vertices"].push_back(
        {{"id", i}, {"state", write_vector(v.state)}, {"parent", index_of(v.parent)}, {"g", v.g}});
  }
  return doc;
}

nlohmann::json path_to_json(const std::vector<StateVector>& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& x : path) doc.push_back(write_vector(x));
  return doc;
}

}  // namespace lesplan
