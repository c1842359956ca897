#include "lesplan/nearest_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lesplan {

NearestIndex::NearestIndex(int dimension) : dim_(dimension) {
  if (dimension < 1) throw ContractViolation("index dimension must be positive");
}

double NearestIndex::squared_distance(std::size_t node, const StateVector& query) const {
  const double* p = coords_.data() + node * static_cast<std::size_t>(dim_);
  double sum = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double diff = p[k] - query[k];
    sum += diff * diff;
  }
  return sum;
}

void NearestIndex::insert(const StateVector& point, Id id, double value) {
  if (point.size() != dim_) throw ContractViolation("index point dimension mismatch");
  const auto node = static_cast<std::int32_t>(nodes_.size());
  coords_.insert(coords_.end(), point.data(), point.data() + dim_);
  ids_.push_back(id);
  nodes_.push_back(Node{});
  nodes_.back().value = value;
  nodes_.back().subtree_max = value;
  if (id >= node_of_.size()) node_of_.resize(static_cast<std::size_t>(id) + 1, -1);
  node_of_[id] = node;
  if (node == 0) return;

  std::int32_t cur = 0;
  int depth = 0;
  for (;;) {
    Node& n = nodes_[static_cast<std::size_t>(cur)];
    n.subtree_max = std::max(n.subtree_max, value);
    const bool go_left = point[n.axis] < coord(static_cast<std::size_t>(cur), n.axis);
    std::int32_t& next = go_left ? n.left : n.right;
    ++depth;
    if (next < 0) {
      next = node;
      nodes_.back().axis = depth % dim_;
      nodes_.back().parent = cur;
      return;
    }
    cur = next;
  }
}

std::optional<std::pair<NearestIndex::Id, double>> NearestIndex::nearest(const StateVector& query) const {
  if (nodes_.empty()) return std::nullopt;
  if (query.size() != dim_) throw ContractViolation("query dimension mismatch");

  double best_d2 = std::numeric_limits<double>::infinity();
  Id best_id = std::numeric_limits<Id>::max();

  struct Frame {
    std::int32_t node;
    double bound;  // squared distance lower bound to the region of this subtree
  };
  std::vector<Frame> stack{{0, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.node < 0 || f.bound > best_d2) continue;
    const auto idx = static_cast<std::size_t>(f.node);
    const double d2 = squared_distance(idx, query);
    if (d2 < best_d2 || (d2 == best_d2 && ids_[idx] < best_id)) {
      best_d2 = d2;
      best_id = ids_[idx];
    }
    const Node& n = nodes_[idx];
    const double diff = query[n.axis] - coord(idx, n.axis);
    const std::int32_t near_side = diff < 0.0 ? n.left : n.right;
    const std::int32_t far_side = diff < 0.0 ? n.right : n.left;
    // Far side first so the near side is popped next.
    stack.push_back({far_side, std::max(f.bound, diff * diff)});
    stack.push_back({near_side, f.bound});
  }
  return std::make_pair(best_id, std::sqrt(best_d2));
}

std::vector<std::pair<NearestIndex::Id, double>> NearestIndex::within(const StateVector& query, double radius) const {
  auto out = within_unordered(query, radius);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second < b.second || (a.second == b.second && a.first < b.first);
  });
  return out;
}

std::vector<std::pair<NearestIndex::Id, double>> NearestIndex::within_unordered(const StateVector& query,
                                                                                double radius) const {
  std::vector<std::pair<Id, double>> out;
  if (nodes_.empty()) return out;
  if (query.size() != dim_) throw ContractViolation("query dimension mismatch");
  const double r2 = radius * radius;

  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::int32_t node = stack.back();
    stack.pop_back();
    if (node < 0) continue;
    const auto idx = static_cast<std::size_t>(node);
    const double d2 = squared_distance(idx, query);
    if (d2 <= r2) out.emplace_back(ids_[idx], std::sqrt(d2));
    const Node& n = nodes_[idx];
    const double diff = query[n.axis] - coord(idx, n.axis);
    if (diff < 0.0) {
      stack.push_back(n.left);
      if (diff * diff <= r2) stack.push_back(n.right);
    } else {
      stack.push_back(n.right);
      if (diff * diff <= r2) stack.push_back(n.left);
    }
  }
  return out;
}

void NearestIndex::set_value(Id id, double value) {
  if (id >= node_of_.size() || node_of_[id] < 0) throw ContractViolation("set_value: unknown id");
  std::int32_t cur = node_of_[id];
  nodes_[static_cast<std::size_t>(cur)].value = value;
  while (cur >= 0) {
    Node& n = nodes_[static_cast<std::size_t>(cur)];
    double m = n.value;
    if (n.left >= 0) m = std::max(m, nodes_[static_cast<std::size_t>(n.left)].subtree_max);
    if (n.right >= 0) m = std::max(m, nodes_[static_cast<std::size_t>(n.right)].subtree_max);
    if (m == n.subtree_max && cur != node_of_[id]) break;
    n.subtree_max = m;
    cur = n.parent;
  }
}

std::vector<std::pair<NearestIndex::Id, double>> NearestIndex::within_above(const StateVector& query, double radius,
                                                                            double base, double slope) const {
  std::vector<std::pair<Id, double>> out;
  if (nodes_.empty()) return out;
  if (query.size() != dim_) throw ContractViolation("query dimension mismatch");
  const double r2 = radius * radius;

  struct Frame {
    std::int32_t node;
    double bound2;  // squared distance lower bound to the region of this subtree
  };
  std::vector<Frame> stack{{0, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.node < 0) continue;
    const auto idx = static_cast<std::size_t>(f.node);
    const Node& n = nodes_[idx];
    if (n.subtree_max <= base + slope * std::sqrt(f.bound2)) continue;
    const double d2 = squared_distance(idx, query);
    if (d2 <= r2) {
      const double d = std::sqrt(d2);
      if (n.value > base + slope * d) out.emplace_back(ids_[idx], d);
    }
    const double diff = query[n.axis] - coord(idx, n.axis);
    const std::int32_t near_side = diff < 0.0 ? n.left : n.right;
    const std::int32_t far_side = diff < 0.0 ? n.right : n.left;
    const double far2 = std::max(f.bound2, diff * diff);
    stack.push_back({near_side, f.bound2});
    if (far2 <= r2) stack.push_back({far_side, far2});
  }
  return out;
}

}  // namespace lesplan
