#include "vcsched/search.hpp"

#include <algorithm>
#include <numeric>

namespace vcsched {

namespace {

struct Link {
  NodeId earlier;  // already-placed neighbor
  EdgeId task_edge;
};

class Backtracker {
 public:
  Backtracker(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candidates, const Admission& admission)
      : task_(task), serv_(serv), candidates_(candidates), admission_(admission) {
    order_.resize(task.size());
    std::iota(order_.begin(), order_.end(), NodeId{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](NodeId a, NodeId b) { return candidates[a].size() < candidates[b].size(); });
    std::vector<bool> placed(task.size(), false);
    links_.resize(task.size());
    for (std::size_t depth = 0; depth < order_.size(); ++depth) {
      const NodeId c = order_[depth];
      for (NodeId nb : task.topology().neighborhood(c)) {
        if (placed[nb]) links_[depth].push_back({nb, *task.topology().edge_id(c, nb)});
      }
      placed[c] = true;
    }
    assignment_.assign(task.size(), 0);
    used_.assign(serv.size(), 0);
  }

  CandidateSet run() {
    extend(0);
    return std::move(found_);
  }

 private:
  void extend(std::size_t depth) {
    if (depth == order_.size()) {
      found_.push_back(Template{assignment_});
      return;
    }
    const NodeId c = order_[depth];
    for (NodeId m : candidates_[c]) {
      if (used_[m]) continue;
      bool ok = true;
      for (const Link& l : links_[depth]) {
        const auto se = serv_.topology().edge_id(m, assignment_[l.earlier]);
        if (!se || !admission_.edge_ok(l.task_edge, *se)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used_[m] = 1;
      assignment_[c] = m;
      extend(depth + 1);
      used_[m] = 0;
    }
  }

  const TaskGraph& task_;
  const ServiceGraph& serv_;
  const AltMap& candidates_;
  const Admission& admission_;
  std::vector<NodeId> order_;
  std::vector<std::vector<Link>> links_;
  std::vector<NodeId> assignment_;
  std::vector<char> used_;
  CandidateSet found_;
};

bool leaf_ok(const TaskGraph& task, const ServiceGraph& serv, const std::vector<NodeId>& a, const Admission& admission) {
  std::vector<char> used(serv.size(), 0);
  for (NodeId m : a) {
    if (used[m]) return false;
    used[m] = 1;
  }
  const auto& edges = task.topology().edges();
  for (EdgeId te = 0; te < edges.size(); ++te) {
    const auto se = serv.topology().edge_id(a[edges[te].first], a[edges[te].second]);
    if (!se || !admission.edge_ok(te, *se)) return false;
  }
  return true;
}

CandidateSet cartesian_search(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candidates,
                              const Admission& admission) {
  CandidateSet found;
  const std::size_t k = task.size();
  for (const auto& c : candidates) {
    if (c.empty()) return found;
  }
  std::vector<std::size_t> digit(k, 0);
  std::vector<NodeId> a(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) a[i] = candidates[i][digit[i]];
    if (leaf_ok(task, serv, a, admission)) found.push_back(Template{a});
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++digit[i] < candidates[i].size()) break;
      digit[i] = 0;
      if (i == 0) return found;
    }
  }
}

void sort_unique(CandidateSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

}  // namespace

PivotSelection select_pivot(const TaskGraph& task, const ServiceGraph& serv, const Admission& admission) {
  const Graph& tg = task.topology();
  const Graph& sg = serv.topology();
  PivotSelection out;
  out.alternatives.resize(task.size());
  std::size_t best = 0;
  bool have_best = false;
  for (NodeId n = 0; n < task.size(); ++n) {
    auto& asp = out.alternatives[n];
    for (NodeId m = 0; m < serv.size(); ++m) {
      if (admission.node_ok(n, m) && tg.degree(n) <= sg.degree(m) &&
          tg.max_neighborhood_degree(n) <= sg.max_neighborhood_degree(m)) {
        asp.push_back(m);
      }
    }
    if (asp.empty()) out.starved.push_back(n);
    const std::size_t ecc = tg.eccentricity(n);
    const std::size_t product = asp.size() * ecc;
    if (!have_best || product < best) {
      best = product;
      have_best = true;
      out.pivot = n;
      out.eccentricity = ecc;
    }
  }
  return out;
}

std::optional<AltMap> explore_region(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot, NodeId anchor,
                                     const Admission& admission) {
  const Graph& tg = task.topology();
  const std::size_t radius = tg.eccentricity(pivot);
  const Subgraph region = ball(serv.topology(), anchor, radius);
  if (region.parent_ids.size() < task.size()) return std::nullopt;
  AltMap candi(task.size());
  for (NodeId n = 0; n < task.size(); ++n) {
    const std::size_t reach = *tg.distance(n, pivot);
    for (NodeId s = 0; s < region.parent_ids.size(); ++s) {
      if (reach < region.center_distance[s]) continue;
      const NodeId m = region.parent_ids[s];
      if (admission.node_ok(n, m) && tg.degree(n) <= region.graph.degree(s) &&
          tg.max_neighborhood_degree(n) <= region.graph.max_neighborhood_degree(s)) {
        candi[n].push_back(m);
      }
    }
  }
  return candi;
}

CandidateSet search_subgraphs(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candidates,
                              const Admission& admission, Enumeration mode) {
  if (candidates.size() != task.size()) throw InputError("candidate map does not cover every component");
  CandidateSet found = mode == Enumeration::Naive ? cartesian_search(task, serv, candidates, admission)
                                                  : Backtracker(task, serv, candidates, admission).run();
  sort_unique(found);
  return found;
}

EnumerationResult enumerate_templates(const TaskGraph& task, const ServiceGraph& serv, const Admission& admission,
                                      Enumeration mode) {
  EnumerationResult out;
  out.pivot = select_pivot(task, serv, admission);
  if (!out.pivot.feasible()) return out;
  for (NodeId anchor : out.pivot.pivot_candidates()) {
    const auto candi = explore_region(task, serv, out.pivot.pivot, anchor, admission);
    if (!candi) continue;
    CandidateSet found = search_subgraphs(task, serv, *candi, admission, mode);
    out.candidates.insert(out.candidates.end(), found.begin(), found.end());
  }
  sort_unique(out.candidates);
  return out;
}

std::optional<Selection> select_minimum(const CandidateSet& candidates,
                                        const std::function<double(const Template&)>& cost) {
  std::optional<Selection> best;
  for (const Template& t : candidates) {
    const double c = cost(t);
    if (!best || c < best->cost || (c == best->cost && t < best->tmpl)) best = Selection{t, c};
  }
  return best;
}

}  // namespace vcsched
