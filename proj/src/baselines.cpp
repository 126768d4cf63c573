#include "vcsched/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace vcsched {

namespace {

/// Realized per-placement completion times and C4 flags.
struct PlacementTable {
  PlacementTable(const TaskGraph& task, const ServiceGraph& serv, const Realization& real)
      : providers(serv.size()), t_sum(task.size() * serv.size()), on_time(task.size() * serv.size()) {
    require_realization_shape(serv, real);
    for (NodeId n = 0; n < task.size(); ++n) {
      const TaskComponent& c = task.component(n);
      for (NodeId m = 0; m < serv.size(); ++m) {
        const double t = completion_time(c.q, c.d, real.f[m], real.r[m]);
        t_sum[n * providers + m] = t;
        on_time[n * providers + m] = t <= c.t_max;
      }
    }
  }
  double time(NodeId n, NodeId m) const { return t_sum[n * providers + m]; }
  bool ok(NodeId n, NodeId m) const { return on_time[n * providers + m] != 0; }

  std::size_t providers;
  std::vector<double> t_sum;
  std::vector<char> on_time;
};

/// Whether SP m can host component c given the SPs already chosen for its
/// placed neighbors (edge present and contact long enough).
bool links_ok(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
              const std::vector<std::optional<NodeId>>& placed, NodeId c, NodeId m) {
  for (NodeId nb : task.topology().neighborhood(c)) {
    if (!placed[nb]) continue;
    const auto se = serv.topology().edge_id(m, *placed[nb]);
    if (!se) return false;
    if (real.t_conn[*se] < task.w_task(*task.topology().edge_id(c, nb))) return false;
  }
  return true;
}

template <class Pick>
std::optional<Template> greedy_place(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                                     const PlacementTable& table, Pick&& pick) {
  std::vector<std::optional<NodeId>> placed(task.size());
  std::vector<char> used(serv.size(), 0);
  std::vector<NodeId> options;
  for (NodeId c : dfs_order(task)) {
    options.clear();
    for (NodeId m = 0; m < serv.size(); ++m) {
      if (!used[m] && table.ok(c, m) && links_ok(task, serv, real, placed, c, m)) options.push_back(m);
    }
    if (options.empty()) return std::nullopt;
    const NodeId m = pick(c, options);
    placed[c] = m;
    used[m] = 1;
  }
  Template t;
  for (const auto& m : placed) t.assignment.push_back(*m);
  return t;
}

}  // namespace

std::size_t injective_assignment_count(std::size_t providers, std::size_t components) {
  if (components > providers) return 0;
  std::size_t count = 1;
  for (std::size_t i = 0; i < components; ++i) {
    const std::size_t factor = providers - i;
    if (count > std::numeric_limits<std::size_t>::max() / factor) return std::numeric_limits<std::size_t>::max();
    count *= factor;
  }
  return count;
}

std::optional<Template> ets(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                            const CostWeights& w, std::size_t cap) {
  w.validate();
  const std::size_t space = injective_assignment_count(serv.size(), task.size());
  if (space > cap) {
    throw EtsCapExceeded("ETS: " + std::to_string(space) + " injective assignments exceed the cap of " +
                         std::to_string(cap));
  }
  const PlacementTable table(task, serv, real);
  const std::size_t k = task.size();
  const std::size_t p = serv.size();
  // Dense SP-pair -> service edge lookup for the leaf checks.
  std::vector<std::ptrdiff_t> edge_of(p * p, -1);
  for (EdgeId e = 0; e < serv.topology().edge_count(); ++e) {
    const NodePair& pr = serv.topology().edge(e);
    edge_of[pr.first * p + pr.second] = static_cast<std::ptrdiff_t>(e);
    edge_of[pr.second * p + pr.first] = static_cast<std::ptrdiff_t>(e);
  }
  const auto& task_edges = task.topology().edges();

  std::vector<NodeId> a(k);
  std::vector<char> used(p, 0);
  std::optional<Template> best;
  double best_cost = std::numeric_limits<double>::infinity();

  auto evaluate_leaf = [&] {
    double worst = 0.0;
    for (NodeId n = 0; n < k; ++n) {
      if (!table.ok(n, a[n])) return;
      worst = std::max(worst, table.time(n, a[n]));
    }
    double exchange = 0.0;
    for (EdgeId te = 0; te < task_edges.size(); ++te) {
      const std::ptrdiff_t se = edge_of[a[task_edges[te].first] * p + a[task_edges[te].second]];
      if (se < 0 || real.t_conn[static_cast<std::size_t>(se)] < task.w_task(te)) return;
      exchange += real.c_exch[static_cast<std::size_t>(se)];
    }
    const double cost = w.lambda_t * worst + w.lambda_c * exchange;
    if (cost < best_cost) {
      best_cost = cost;
      best = Template{a};
    }
  };

  auto enumerate = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      evaluate_leaf();
      return;
    }
    for (NodeId m = 0; m < p; ++m) {
      if (used[m]) continue;
      used[m] = 1;
      a[depth] = m;
      self(self, depth + 1);
      used[m] = 0;
    }
  };
  enumerate(enumerate, 0);
  return best;
}

std::vector<NodeId> dfs_order(const TaskGraph& task) {
  std::vector<NodeId> order;
  std::vector<char> seen(task.size(), 0);
  auto visit = [&](auto&& self, NodeId v) -> void {
    seen[v] = 1;
    order.push_back(v);
    for (NodeId u : task.topology().neighborhood(v)) {
      if (!seen[u]) self(self, u);
    }
  };
  visit(visit, 0);
  return order;
}

std::optional<Template> tpts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                             const CostWeights& w) {
  w.validate();
  const PlacementTable table(task, serv, real);
  return greedy_place(task, serv, real, table, [&](NodeId c, const std::vector<NodeId>& options) {
    NodeId best = options.front();
    for (NodeId m : options) {
      if (table.time(c, m) < table.time(c, best)) best = m;
    }
    return best;
  });
}

std::optional<Template> dpts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                             const CostWeights& w) {
  w.validate();
  const PlacementTable table(task, serv, real);
  return greedy_place(task, serv, real, table, [&](NodeId, const std::vector<NodeId>& options) {
    NodeId best = options.front();
    for (NodeId m : options) {
      if (serv.topology().degree(m) > serv.topology().degree(best)) best = m;
    }
    return best;
  });
}

std::optional<Template> rts(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                            const CostWeights& w, SeededRng& rng, std::size_t max_restarts) {
  w.validate();
  const PlacementTable table(task, serv, real);
  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    auto placed = greedy_place(task, serv, real, table, [&](NodeId, const std::vector<NodeId>& options) {
      return options[rng.uniform_index(options.size())];
    });
    if (placed) return placed;
  }
  return std::nullopt;
}

}  // namespace vcsched
