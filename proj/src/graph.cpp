#include "vcsched/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vcsched {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  const NodePair p = NodePair::of(a, b);
  return (static_cast<std::uint64_t>(p.first) << 32) | static_cast<std::uint64_t>(p.second);
}

std::vector<std::int32_t> bfs_from(const std::vector<std::vector<NodeId>>& adj, NodeId source) {
  std::vector<std::int32_t> dist(adj.size(), -1);
  std::deque<NodeId> frontier{source};
  dist[source] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

Graph::Graph(std::size_t node_count, std::span<const NodePair> edges) : adjacency_(node_count) {
  if (node_count > (std::size_t{1} << 31)) throw InputError("graph too large");
  edges_.reserve(edges.size());
  for (const NodePair& raw : edges) {
    if (raw.first >= node_count || raw.second >= node_count) {
      throw InputError("edge (" + std::to_string(raw.first) + "," + std::to_string(raw.second) +
                       ") references an unknown node");
    }
    if (raw.first == raw.second) {
      throw InputError("self-loop on node " + std::to_string(raw.first));
    }
    const NodePair p = NodePair::of(raw.first, raw.second);
    const auto [it, inserted] = edge_lookup_.emplace(pair_key(p.first, p.second), edges_.size());
    if (!inserted) {
      throw InputError("duplicate edge (" + std::to_string(p.first) + "," + std::to_string(p.second) + ")");
    }
    edges_.push_back(p);
    adjacency_[p.first].push_back(p.second);
    adjacency_[p.second].push_back(p.first);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

  mndeg_.assign(node_count, 0);
  for (NodeId v = 0; v < node_count; ++v) {
    for (NodeId u : adjacency_[v]) mndeg_[v] = std::max(mndeg_[v], adjacency_[u].size());
  }

  dist_.resize(node_count * node_count);
  for (NodeId v = 0; v < node_count; ++v) {
    const auto row = bfs_from(adjacency_, v);
    std::copy(row.begin(), row.end(), dist_.begin() + static_cast<std::ptrdiff_t>(v * node_count));
  }
}

void Graph::check_node(NodeId v) const {
  if (v >= adjacency_.size()) {
    throw InputError("unknown node id " + std::to_string(v) + " (graph has " +
                     std::to_string(adjacency_.size()) + " nodes)");
  }
}

std::span<const NodeId> Graph::neighborhood(NodeId v) const {
  check_node(v);
  return adjacency_[v];
}

std::size_t Graph::degree(NodeId v) const {
  check_node(v);
  return adjacency_[v].size();
}

std::size_t Graph::max_neighborhood_degree(NodeId v) const {
  check_node(v);
  return mndeg_[v];
}

HopDistance Graph::distance(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const std::int32_t d = dist_[u * node_count() + v];
  if (d < 0) return std::nullopt;
  return static_cast<std::size_t>(d);
}

std::size_t Graph::eccentricity(NodeId v) const {
  check_node(v);
  std::size_t ecc = 0;
  for (NodeId u = 0; u < node_count(); ++u) {
    const std::int32_t d = dist_[v * node_count() + u];
    if (d < 0) {
      throw InputError("eccentricity undefined: node " + std::to_string(u) + " unreachable from " +
                       std::to_string(v));
    }
    ecc = std::max(ecc, static_cast<std::size_t>(d));
  }
  return ecc;
}

bool Graph::connected() const {
  if (node_count() == 0) return true;
  return std::none_of(dist_.begin(), dist_.begin() + static_cast<std::ptrdiff_t>(node_count()),
                      [](std::int32_t d) { return d < 0; });
}

std::optional<EdgeId> Graph::edge_id(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count() || u == v) return std::nullopt;
  const auto it = edge_lookup_.find(pair_key(u, v));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

Subgraph ball(const Graph& g, NodeId center, std::size_t radius) {
  g.neighborhood(center);  // validates the id
  Subgraph out;
  std::vector<std::size_t> local(g.node_count(), g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const HopDistance d = g.distance(center, v);
    if (d && *d <= radius) {
      local[v] = out.parent_ids.size();
      out.parent_ids.push_back(v);
      out.center_distance.push_back(*d);
    }
  }
  std::vector<NodePair> kept;
  for (const NodePair& e : g.edges()) {
    if (local[e.first] < g.node_count() && local[e.second] < g.node_count()) {
      kept.push_back(NodePair::of(local[e.first], local[e.second]));
    }
  }
  out.graph = Graph(out.parent_ids.size(), kept);
  return out;
}

TaskGraph::TaskGraph(std::vector<TaskComponent> components, std::span<const TaskEdge> edges)
    : components_(std::move(components)) {
  if (components_.empty()) throw InputError("task graph has no components");
  for (std::size_t n = 0; n < components_.size(); ++n) {
    const TaskComponent& c = components_[n];
    const std::string where = "component " + std::to_string(n);
    if (!(c.t_max > 0.0)) throw InputError(where + ": t_max must be > 0");
    if (!(c.q > 0.0)) throw InputError(where + ": q must be > 0");
    if (!(c.d >= 0.0)) throw InputError(where + ": d must be >= 0");
  }
  std::vector<NodePair> pairs;
  pairs.reserve(edges.size());
  for (const TaskEdge& e : edges) {
    if (!(e.w_task > 0.0)) {
      throw InputError("task edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + "): w_task must be > 0");
    }
    pairs.push_back({e.u, e.v});
  }
  topology_ = Graph(components_.size(), pairs);
  if (!topology_.connected()) throw InputError("task graph is not connected");
  w_task_.reserve(edges.size());
  for (const TaskEdge& e : edges) w_task_.push_back(e.w_task);
}

bool is_structurally_valid(const TaskGraph& task, const ServiceGraph& serv, const Template& t) {
  if (t.assignment.size() != task.size()) return false;
  std::vector<bool> used(serv.size(), false);
  for (NodeId m : t.assignment) {
    if (m >= serv.size() || used[m]) return false;
    used[m] = true;
  }
  for (const NodePair& e : task.topology().edges()) {
    if (!serv.topology().has_edge(t.assignment[e.first], t.assignment[e.second])) return false;
  }
  return true;
}

void require_structurally_valid(const TaskGraph& task, const ServiceGraph& serv, const Template& t) {
  if (t.assignment.size() != task.size()) {
    throw InputError("template assigns " + std::to_string(t.assignment.size()) + " components, task has " +
                     std::to_string(task.size()));
  }
  std::vector<bool> used(serv.size(), false);
  for (std::size_t n = 0; n < t.assignment.size(); ++n) {
    const NodeId m = t.assignment[n];
    if (m >= serv.size()) throw InputError("component " + std::to_string(n) + " mapped to unknown SP");
    if (used[m]) throw InputError("SP " + std::to_string(m) + " hosts more than one component");
    used[m] = true;
  }
  for (const NodePair& e : task.topology().edges()) {
    if (!serv.topology().has_edge(t.assignment[e.first], t.assignment[e.second])) {
      throw InputError("task edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                       ") is not carried by a service edge");
    }
  }
}

std::string to_string(const Template& t) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < t.assignment.size(); ++i) {
    if (i) os << ", ";
    os << 's' << t.assignment[i];
  }
  os << ']';
  return os.str();
}

}  // namespace vcsched
