#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vcsched/graph.hpp"

namespace vcsched {

/// Candidate SP ids per task component (the ASP sets).
using AltMap = std::vector<std::vector<NodeId>>;

/// Complete candidate templates, sorted ascending and free of duplicates.
using CandidateSet = std::vector<Template>;

/// Precomputed admissibility of (component, SP) placements and of
/// (task edge, service edge) carriers. The offline search fills it from risk
/// bounds, the online search from realized values.
class Admission {
 public:
  Admission(std::size_t components, std::size_t providers, std::size_t task_edges, std::size_t serv_edges)
      : providers_(providers),
        serv_edges_(serv_edges),
        node_(components * providers, 1),
        edge_(task_edges * serv_edges, 1) {}

  bool node_ok(NodeId comp, NodeId sp) const { return node_[comp * providers_ + sp] != 0; }
  bool edge_ok(EdgeId task_edge, EdgeId serv_edge) const { return edge_[task_edge * serv_edges_ + serv_edge] != 0; }
  void set_node(NodeId comp, NodeId sp, bool ok) { node_[comp * providers_ + sp] = ok; }
  void set_edge(EdgeId task_edge, EdgeId serv_edge, bool ok) { edge_[task_edge * serv_edges_ + serv_edge] = ok; }

 private:
  std::size_t providers_;
  std::size_t serv_edges_;
  std::vector<char> node_;
  std::vector<char> edge_;
};

struct PivotSelection {
  NodeId pivot = 0;
  std::size_t eccentricity = 0;
  /// ASP of every component against the whole service graph.
  AltMap alternatives;
  /// Components left without any admissible SP.
  std::vector<NodeId> starved;

  bool feasible() const { return starved.empty(); }
  const std::vector<NodeId>& pivot_candidates() const { return alternatives.at(pivot); }
};

enum class Enumeration {
  FailFirst,  // backtracking, components ordered by ascending candidate count
  Naive,      // full Cartesian product of candidates, checked at the leaves
};

/// Admits SP m for component n when `admission` allows it and
/// Deg(n) <= Deg(m), MNdeg(n) <= MNdeg(m). Pivot minimizes |ASP| * Ecc,
/// lowest id on ties.
PivotSelection select_pivot(const TaskGraph& task, const ServiceGraph& serv, const Admission& admission);

/// Candidates inside the ball of radius Ecc(pivot) around `anchor`.
///
/// Returns std::nullopt when the ball holds fewer SPs than the task has
/// components. Otherwise SP s is a candidate for component n iff
/// Dst(n, pivot) >= Dst(s, anchor), the placement is admissible, and the
/// degree and MNdeg of n do not exceed those of s measured inside the ball.
std::optional<AltMap> explore_region(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot, NodeId anchor,
                                     const Admission& admission);

/// Every injective assignment drawn from `candidates` whose task edges all
/// land on admissible service edges.
CandidateSet search_subgraphs(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candidates,
                              const Admission& admission, Enumeration mode = Enumeration::FailFirst);

/// Pivot selection, then region exploration and subgraph search for every
/// anchor in ASP(pivot); the per-anchor results are merged and deduplicated.
struct EnumerationResult {
  PivotSelection pivot;
  CandidateSet candidates;
};
EnumerationResult enumerate_templates(const TaskGraph& task, const ServiceGraph& serv, const Admission& admission,
                                      Enumeration mode = Enumeration::FailFirst);

struct Selection {
  Template tmpl;
  double cost = 0.0;
};

/// Minimum of `cost` over `candidates`; equal costs resolve to the
/// lexicographically smallest assignment.
std::optional<Selection> select_minimum(const CandidateSet& candidates,
                                        const std::function<double(const Template&)>& cost);

}  // namespace vcsched
