#include "lesplan/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace lesplan {

SearchSpace::SearchSpace(StateVector lower, StateVector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw ContractViolation("search space bounds differ in dimension");
  if (lower_.size() < 2) throw ContractViolation("search space dimension must be at least 2");
  for (int i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw ContractViolation("search space bounds must satisfy lower < upper");
    }
  }
}

double SearchSpace::measure() const { return (upper_ - lower_).prod(); }

bool SearchSpace::contains(const StateVector& x) const {
  if (x.size() != lower_.size()) return false;
  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

void SearchSpace::require_contains(const StateVector& x) const {
  if (x.size() != lower_.size()) throw ContractViolation("state dimension mismatch");
  if (!contains(x)) throw DomainError("state outside the search space");
}

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::constant:
      return "constant";
    case CostKind::potential:
      return "potential";
    case CostKind::custom:
      return "custom";
  }
  return "unknown";
}

CostField CostField::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw ContractViolation("constant cost must be finite and >= 0");
  CostField field;
  field.kind_ = CostKind::constant;
  field.constant_ = value;
  return field;
}

CostField CostField::potential(std::vector<StateVector> centers) {
  if (centers.empty()) throw ContractViolation("potential cost needs at least one center");
  for (const auto& c : centers) {
    if (c.size() != centers.front().size()) throw ContractViolation("potential centers differ in dimension");
  }
  CostField field;
  field.kind_ = CostKind::potential;
  field.centers_ = std::move(centers);
  return field;
}

CostField CostField::custom(std::function<double(const StateVector&)> evaluator) {
  if (!evaluator) throw ContractViolation("custom cost needs an evaluator");
  CostField field;
  field.kind_ = CostKind::custom;
  field.evaluator_ = std::make_shared<const std::function<double(const StateVector&)>>(std::move(evaluator));
  return field;
}

double CostField::operator()(const StateVector& x) const {
  switch (kind_) {
    case CostKind::constant:
      return constant_;
    case CostKind::potential: {
      double sum = 0.0;
      for (const auto& c : centers_) sum += std::exp(-(c - x).squaredNorm());
      return 1.0 + 9.0 * sum;
    }
    case CostKind::custom:
      return (*evaluator_)(x);
  }
  return 0.0;
}

double CostField::lower_bound() const {
  switch (kind_) {
    case CostKind::constant:
      return constant_;
    case CostKind::potential:
      return 1.0;
    case CostKind::custom:
      return 0.0;
  }
  return 0.0;
}

double CostField::segment_mean(const StateVector& a, const StateVector& b, std::int64_t intervals) const {
  if (intervals <= 0) return (*this)(a);
  if (kind_ == CostKind::constant) return constant_;

  const double step = 1.0 / static_cast<double>(intervals);
  const auto weight = [intervals](std::int64_t k) { return (k == 0 || k == intervals) ? 0.5 : 1.0; };

  double total = 0.0;
  if (kind_ == CostKind::potential) {
    // |c - (a + s d)|^2 = |c - a|^2 - 2 s (c - a).d + s^2 |d|^2
    const Eigen::Index dim = a.size();
    double dd = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) dd += (b[i] - a[i]) * (b[i] - a[i]);
    thread_local std::vector<std::pair<double, double>> terms;
    terms.clear();
    for (const auto& c : centers_) {
      double pp = 0.0;
      double pd = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double p = c[i] - a[i];
        pp += p * p;
        pd += p * (b[i] - a[i]);
      }
      terms.emplace_back(pp, pd);
    }
    // Node values of each Gaussian follow a geometric recurrence in k:
    // f(k+1) = f(k) r(k), r(k+1) = r(k) m, so only three exponentials per
    // center are needed. Centers whose start value would underflow are
    // evaluated directly.
    thread_local std::vector<double> node_sum;
    node_sum.assign(static_cast<std::size_t>(intervals) + 1, 0.0);
    const double h2dd = step * step * dd;
    for (const auto& [pp, pd] : terms) {
      // Minimum of the squared distance over s in [0, 1].
      const double s_star = dd > 0.0 ? std::clamp(pd / dd, 0.0, 1.0) : 0.0;
      const double q_min = pp - 2.0 * s_star * pd + s_star * s_star * dd;
      if (q_min > 745.0) continue;
      if (pp > 600.0 || h2dd > 300.0) {
        for (std::int64_t k = 0; k <= intervals; ++k) {
          const double s = static_cast<double>(k) * step;
          node_sum[static_cast<std::size_t>(k)] += std::exp(-std::max(0.0, pp - 2.0 * s * pd + s * s * dd));
        }
        continue;
      }
      double f = std::exp(-pp);
      double r = std::exp(2.0 * step * pd - h2dd);
      const double m = std::exp(-2.0 * h2dd);
      for (std::int64_t k = 0; k <= intervals; ++k) {
        node_sum[static_cast<std::size_t>(k)] += f;
        f *= r;
        r *= m;
      }
    }
    for (std::int64_t k = 0; k <= intervals; ++k) {
      total += weight(k) * (1.0 + 9.0 * node_sum[static_cast<std::size_t>(k)]);
    }
  } else {
    StateVector x(a.size());
    for (std::int64_t k = 0; k <= intervals; ++k) {
      const double s = static_cast<double>(k) * step;
      x = a + s * (b - a);
      total += weight(k) * (*evaluator_)(x);
    }
  }
  return total * step;
}

double state_cost(const CostField& field, const SearchSpace& space, const StateVector& x) {
  space.require_contains(x);
  return field(x);
}

std::int64_t segment_intervals(double length, double resolution) {
  if (!(resolution > 0.0)) throw ContractViolation("resolution must be positive");
  if (length <= 0.0) return 0;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(length / resolution)));
}

namespace {

bool lexicographically_less(const StateVector& a, const StateVector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

}  // namespace

double edge_cost(const CostField& field, const StateVector& u, const StateVector& v, double resolution) {
  require_same_dimension(u, v);
  // Integrate in a canonical direction so that the result is bit-symmetric.
  const bool swap = lexicographically_less(v, u);
  const StateVector& a = swap ? v : u;
  const StateVector& b = swap ? u : v;
  const double length = (b - a).norm();
  if (length == 0.0) return 0.0;
  return length * field.segment_mean(a, b, segment_intervals(length, resolution));
}

double heuristic(const StateVector& a, const StateVector& b) {
  require_same_dimension(a, b);
  return (a - b).norm();
}

bool Box::contains_interior(const StateVector& x) const {
  for (int i = 0; i < x.size(); ++i) {
    if (!(x[i] > lower[i] && x[i] < upper[i])) return false;
  }
  return true;
}

CollisionModel::CollisionModel(double resolution, std::vector<Box> obstacles)
    : resolution_(resolution), obstacles_(std::move(obstacles)) {
  if (!(resolution_ > 0.0)) throw ContractViolation("collision resolution must be positive");
  for (const auto& box : obstacles_) {
    if (box.lower.size() != box.upper.size()) throw ContractViolation("obstacle bounds differ in dimension");
  }
}

CollisionModel::CollisionModel(double resolution, std::function<bool(const StateVector&)> is_free)
    : resolution_(resolution),
      predicate_(std::make_shared<const std::function<bool(const StateVector&)>>(std::move(is_free))) {
  if (!(resolution_ > 0.0)) throw ContractViolation("collision resolution must be positive");
}

bool CollisionModel::is_free(const StateVector& x) const {
  for (const auto& box : obstacles_) {
    if (box.lower.size() == x.size() && box.contains_interior(x)) return false;
  }
  if (predicate_) return (*predicate_)(x);
  return true;
}

bool is_segment_free(const CollisionModel& model, const StateVector& u, const StateVector& v) {
  require_same_dimension(u, v);
  const std::int64_t n = segment_intervals((v - u).norm(), model.resolution());
  if (!model.is_free(u)) return false;
  if (n == 0) return true;
  if (!model.is_free(v)) return false;

  const StateVector dir = v - u;
  const double step = 1.0 / static_cast<double>(n);
  std::deque<std::pair<std::int64_t, std::int64_t>> pending{{0, n}};
  while (!pending.empty()) {
    const auto [lo, hi] = pending.front();
    pending.pop_front();
    if (hi - lo < 2) continue;
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (!model.is_free(u + (static_cast<double>(mid) * step) * dir)) return false;
    pending.emplace_back(lo, mid);
    pending.emplace_back(mid, hi);
  }
  return true;
}

bool GoalRegion::contains(const StateVector& x) const { return (x - center).norm() <= radius; }

void Problem::validate() const {
  const int d = space.dimension();
  if (start.size() != d || goal.center.size() != d) throw ConfigurationError("start/goal dimension mismatch");
  if (!space.contains(start)) throw ConfigurationError("start outside the search space");
  if (!space.contains(goal.center)) throw ConfigurationError("goal outside the search space");
  if (!collision.is_free(start)) throw ConfigurationError("start state is in collision");
  if (!collision.is_free(goal.center)) throw ConfigurationError("goal state is in collision");
  if (!(goal.radius > 0.0)) throw ConfigurationError("goal radius must be positive");
  if ((start - goal.center).norm() == 0.0) throw ConfigurationError("start and goal coincide");
}

double open_unit(RandomStream& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0 && u < 1.0) return u;
  }
}

StateVector sample_ball(const StateVector& center, double radius, RandomStream& rng) {
  const auto d = center.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector dir(d);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) dir[i] = normal(rng);
    norm = dir.norm();
  } while (norm == 0.0);
  double scale = 1.0;
  do {
    scale = std::pow(open_unit(rng), 1.0 / static_cast<double>(d));
  } while (scale >= 1.0);
  return center + (radius * scale / norm) * dir;
}

}  // namespace lesplan
