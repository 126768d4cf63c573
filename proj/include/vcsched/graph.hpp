#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vcsched/error.hpp"

namespace vcsched {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Unordered node pair, always stored with first < second.
struct NodePair {
  NodeId first = 0;
  NodeId second = 0;

  static NodePair of(NodeId a, NodeId b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Hop distance between two nodes; std::nullopt means unreachable.
using HopDistance = std::optional<std::size_t>;

/// Immutable simple undirected graph over dense node ids 0..n-1.
///
/// All structural metrics (degree, maximum neighborhood degree, all-pairs
/// BFS distances) are computed once at construction.
class Graph {
 public:
  Graph() = default;
  /// Throws InputError on self-loops, duplicate pairs or out-of-range ids.
  Graph(std::size_t node_count, std::span<const NodePair> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<NodePair>& edges() const { return edges_; }
  const NodePair& edge(EdgeId e) const { return edges_.at(e); }

  /// Sorted neighbor ids of v.
  std::span<const NodeId> neighborhood(NodeId v) const;
  std::size_t degree(NodeId v) const;
  /// Largest degree among the neighbors of v, 0 for an isolated node.
  std::size_t max_neighborhood_degree(NodeId v) const;
  HopDistance distance(NodeId u, NodeId v) const;
  /// Largest distance from v to any other node. Throws InputError if some
  /// node is unreachable from v.
  std::size_t eccentricity(NodeId v) const;
  bool connected() const;

  bool has_edge(NodeId u, NodeId v) const { return edge_id(u, v).has_value(); }
  std::optional<EdgeId> edge_id(NodeId u, NodeId v) const;

 private:
  void check_node(NodeId v) const;

  std::vector<NodePair> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::size_t> mndeg_;
  std::vector<std::int32_t> dist_;  // row-major, -1 = unreachable
  std::unordered_map<std::uint64_t, EdgeId> edge_lookup_;
};

/// Induced subgraph together with the ids its nodes carry in the parent graph.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_ids;  // local id -> parent id, ascending
  std::vector<std::size_t> center_distance;  // local id -> hops from center
};

/// Induced subgraph on every node within `radius` hops of `center`.
Subgraph ball(const Graph& g, NodeId center, std::size_t radius);

struct TaskComponent {
  double t_max = 0.0;  // seconds
  double q = 0.0;      // CPU cycles
  double d = 0.0;      // bits
};

struct TaskEdge {
  NodeId u = 0;
  NodeId v = 0;
  double w_task = 0.0;  // seconds of contact needed for the exchange
};

/// Connected, simple, undirected graph task.
class TaskGraph {
 public:
  TaskGraph() = default;
  TaskGraph(std::vector<TaskComponent> components, std::span<const TaskEdge> edges);

  const Graph& topology() const { return topology_; }
  std::size_t size() const { return components_.size(); }
  const std::vector<TaskComponent>& components() const { return components_; }
  const TaskComponent& component(NodeId n) const { return components_.at(n); }
  /// Exchange duration of topology edge e.
  double w_task(EdgeId e) const { return w_task_.at(e); }

 private:
  std::vector<TaskComponent> components_;
  Graph topology_;
  std::vector<double> w_task_;  // aligned with topology_.edges()
};

/// VC topology; connectivity is not required.
class ServiceGraph {
 public:
  ServiceGraph() = default;
  ServiceGraph(std::size_t provider_count, std::span<const NodePair> edges)
      : topology_(provider_count, edges) {}

  const Graph& topology() const { return topology_; }
  std::size_t size() const { return topology_.node_count(); }

 private:
  Graph topology_;
};

/// Component -> SP assignment (the 1-entries of the allocation matrix).
struct Template {
  std::vector<NodeId> assignment;

  friend bool operator==(const Template&, const Template&) = default;
  friend auto operator<=>(const Template&, const Template&) = default;
};

/// Total, injective and edge-preserving (non-induced monomorphism).
bool is_structurally_valid(const TaskGraph& task, const ServiceGraph& serv, const Template& t);

/// Throws InputError naming the first violated property.
void require_structurally_valid(const TaskGraph& task, const ServiceGraph& serv, const Template& t);

std::string to_string(const Template& t);

}  // namespace vcsched
