#include "lesplan/tree.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lesplan {

namespace {

// Journal entries beyond this multiple of the tree size are dropped and the
// consumer is told to rescan.
constexpr std::size_t kJournalSlack = 4;

}  // namespace

Tree::Tree(StateVector root_state, std::optional<StateVector> heuristic_target)
    : index_(static_cast<int>(root_state.size())), heuristic_target_(std::move(heuristic_target)) {
  if (heuristic_target_) require_same_dimension(root_state, *heuristic_target_);
  Vertex root;
  root.state = std::move(root_state);
  root.parent = VertexId{0};
  root.cost_to_go = heuristic_target_ ? heuristic(root.state, *heuristic_target_) : 0.0;
  index_.insert(root.state, 0);
  vertices_.push_back(std::move(root));
  journal(VertexId{0});
}

const Vertex& Tree::vertex(VertexId v) const {
  if (!contains(v)) throw ContractViolation("unknown vertex id");
  return vertices_[index_of(v)];
}

Vertex& Tree::mutable_vertex(VertexId v) {
  if (!contains(v)) throw ContractViolation("unknown vertex id");
  return vertices_[index_of(v)];
}

bool Tree::is_child(VertexId parent, VertexId child) const {
  const auto& kids = vertex(parent).children;
  return std::binary_search(kids.begin(), kids.end(), child);
}

void Tree::journal(VertexId v) {
  if (changes_.overflowed) return;
  if (changes_.vertices.size() > kJournalSlack * (vertices_.size() + 16)) {
    changes_.vertices.clear();
    changes_.overflowed = true;
    return;
  }
  changes_.vertices.push_back(v);
}

ChangeLog Tree::take_changes() {
  ChangeLog out = std::move(changes_);
  changes_ = ChangeLog{};
  return out;
}

VertexId Tree::add_vertex(StateVector state, VertexId parent, double edge_cost) {
  if (!contains(parent)) throw ContractViolation("add_vertex: unknown parent id");
  if (state.size() != dimension()) throw ContractViolation("add_vertex: state dimension mismatch");
  if (!(edge_cost >= 0.0) || !std::isfinite(edge_cost)) throw ContractViolation("add_vertex: edge cost must be finite and >= 0");

  const VertexId id = vertex_id(vertices_.size());
  Vertex v;
  v.parent = parent;
  v.edge_cost_to_parent = edge_cost;
  v.g = vertices_[index_of(parent)].g + edge_cost;
  v.cost_to_go = heuristic_target_ ? heuristic(state, *heuristic_target_) : 0.0;
  v.state = std::move(state);
  index_.insert(v.state, static_cast<NearestIndex::Id>(id), v.g);
  vertices_.push_back(std::move(v));

  // New ids are the largest so far; append keeps the children set sorted.
  vertices_[index_of(parent)].children.push_back(id);
  journal(id);
  journal(parent);
  return id;
}

bool Tree::is_ancestor(VertexId ancestor, VertexId v) const {
  vertex(ancestor);
  VertexId cur = v;
  for (;;) {
    if (cur == ancestor) return true;
    const VertexId up = vertex(cur).parent;
    if (up == cur) return false;
    cur = up;
  }
}

double Tree::rewire(VertexId v, VertexId new_parent, double new_edge_cost, std::vector<VertexId>* shifted) {
  if (!contains(v) || !contains(new_parent)) throw ContractViolation("rewire: unknown vertex id");
  if (v == root()) throw ContractViolation("rewire: the root has no parent edge");
  if (is_ancestor(v, new_parent)) throw ContractViolation("rewire: new parent is the vertex or one of its descendants");
  if (!(new_edge_cost >= 0.0) || !std::isfinite(new_edge_cost)) throw ContractViolation("rewire: edge cost must be finite and >= 0");

  Vertex& node = vertices_[index_of(v)];
  const double new_g = vertices_[index_of(new_parent)].g + new_edge_cost;
  const double delta = node.g - new_g;
  if (!(delta > 0.0)) throw ContractViolation("rewire: new parent does not improve cost-to-come");

  auto& old_kids = vertices_[index_of(node.parent)].children;
  old_kids.erase(std::lower_bound(old_kids.begin(), old_kids.end(), v));
  auto& new_kids = vertices_[index_of(new_parent)].children;
  new_kids.insert(std::lower_bound(new_kids.begin(), new_kids.end(), v), v);
  journal(node.parent);
  journal(new_parent);
  node.parent = new_parent;
  node.edge_cost_to_parent = new_edge_cost;

  // Cost-to-come is additive along paths, so the whole subtree shifts by delta.
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    const VertexId cur = stack.back();
    stack.pop_back();
    Vertex& w = vertices_[index_of(cur)];
    w.g = cur == v ? new_g : w.g - delta;
    index_.set_value(static_cast<NearestIndex::Id>(cur), w.g);
    journal(cur);
    if (shifted) shifted->push_back(cur);
    stack.insert(stack.end(), w.children.begin(), w.children.end());
  }
  ++rewires_;
  return delta;
}

std::size_t Tree::descendant_count(VertexId v) const {
  std::size_t count = 0;
  std::vector<VertexId> stack(vertex(v).children.begin(), vertex(v).children.end());
  while (!stack.empty()) {
    const VertexId cur = stack.back();
    stack.pop_back();
    ++count;
    const auto& kids = vertices_[index_of(cur)].children;
    stack.insert(stack.end(), kids.begin(), kids.end());
  }
  return count;
}

std::size_t Tree::dhat(VertexId v, std::span<const VertexId> subset) const {
  std::size_t total = vertex(v).children.size();
  for (VertexId u : subset) {
    if (!is_child(v, u)) throw ContractViolation("dhat: subset member is not a child");
    total += vertices_[index_of(u)].children.size();
  }
  return total;
}

VertexId Tree::nearest(const StateVector& x) const {
  return vertex_id(index_.nearest(x)->first);
}

std::vector<VertexId> Tree::near(const StateVector& x, double radius) const {
  const auto hits = index_.within(x, radius);
  std::vector<VertexId> out;
  out.reserve(hits.size());
  for (const auto& [id, dist] : hits) out.push_back(vertex_id(id));
  return out;
}

std::vector<VertexId> Tree::near_unordered(const StateVector& x, double radius) const {
  const auto hits = index_.within_unordered(x, radius);
  std::vector<VertexId> out;
  out.reserve(hits.size());
  for (const auto& [id, dist] : hits) out.push_back(vertex_id(id));
  return out;
}

std::vector<VertexId> Tree::near_above(const StateVector& x, double radius, double base, double slope) const {
  const auto hits = index_.within_above(x, radius, base, slope);
  std::vector<VertexId> out;
  out.reserve(hits.size());
  for (const auto& [id, dist] : hits) out.push_back(vertex_id(id));
  return out;
}

void Tree::increment_selection(VertexId v) { ++mutable_vertex(v).selection_count; }

}  // namespace lesplan
