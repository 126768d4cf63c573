#include "vcsched/online.hpp"

#include <string>

#include "vcsched/baselines.hpp"

namespace vcsched {

Admission realized_admission(const TaskGraph& task, const ServiceGraph& serv, const Realization& real) {
  require_realization_shape(serv, real);
  const std::size_t task_edges = task.topology().edge_count();
  const std::size_t serv_edges = serv.topology().edge_count();
  Admission a(task.size(), serv.size(), task_edges, serv_edges);
  for (NodeId n = 0; n < task.size(); ++n) {
    const TaskComponent& c = task.component(n);
    for (NodeId m = 0; m < serv.size(); ++m) {
      a.set_node(n, m, completion_time(c.q, c.d, real.f[m], real.r[m]) <= c.t_max);
    }
  }
  for (EdgeId te = 0; te < task_edges; ++te) {
    for (EdgeId se = 0; se < serv_edges; ++se) a.set_edge(te, se, real.t_conn[se] >= task.w_task(te));
  }
  return a;
}

PivotSelection pivot_select_online(const TaskGraph& task, const ServiceGraph& serv, const Realization& real) {
  return select_pivot(task, serv, realized_admission(task, serv, real));
}

std::optional<AltMap> region_explore_online(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot,
                                            NodeId anchor, const Realization& real) {
  return explore_region(task, serv, pivot, anchor, realized_admission(task, serv, real));
}

CandidateSet subg_search_online(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candi,
                                const Realization& real, Enumeration mode) {
  return search_subgraphs(task, serv, candi, realized_admission(task, serv, real), mode);
}

std::optional<Selection> opt_select_online(const TaskGraph& task, const ServiceGraph& serv, const CandidateSet& cands,
                                           const Realization& real, const CostWeights& w) {
  w.validate();
  return select_minimum(cands, [&](const Template& t) { return cost_function(task, serv, t, real, w); });
}

OnlineResult te_insta_iss(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                          const CostWeights& w) {
  w.validate();
  const EnumerationResult found = enumerate_templates(task, serv, realized_admission(task, serv, real));
  OnlineResult out;
  out.candidate_count = found.candidates.size();
  if (const auto best = opt_select_online(task, serv, found.candidates, real, w)) {
    out.tmpl = best->tmpl;
    out.cost = best->cost;
  }
  return out;
}

bool check_template_validity(const TaskGraph& task, const ServiceGraph& serv, const Template& a_off,
                             const Realization& real) {
  if (a_off.assignment.size() != task.size()) {
    throw InputError("template covers " + std::to_string(a_off.assignment.size()) + " components, task has " +
                     std::to_string(task.size()));
  }
  for (NodeId m : a_off.assignment) {
    if (m >= serv.size()) throw InputError("template references unknown SP " + std::to_string(m));
  }
  require_realization_shape(serv, real);
  std::vector<char> used(serv.size(), 0);
  for (NodeId n = 0; n < task.size(); ++n) {
    const NodeId m = a_off.assignment[n];
    if (used[m]) return false;
    used[m] = 1;
    const TaskComponent& c = task.component(n);
    if (completion_time(c.q, c.d, real.f[m], real.r[m]) > c.t_max) return false;
  }
  const auto& edges = task.topology().edges();
  for (EdgeId te = 0; te < edges.size(); ++te) {
    const auto se = serv.topology().edge_id(a_off.assignment[edges[te].first], a_off.assignment[edges[te].second]);
    if (!se || real.t_conn[*se] < task.w_task(te)) return false;
  }
  return true;
}

std::string_view source_name(TemplateSource s) {
  switch (s) {
    case TemplateSource::OfflineReused:
      return "offline_reused";
    case TemplateSource::OnlineBackup:
      return "online_backup";
    case TemplateSource::Online:
      return "online";
    case TemplateSource::Infeasible:
      return "infeasible";
  }
  return "infeasible";
}

TemplateSource parse_source(std::string_view name) {
  for (auto s : {TemplateSource::OfflineReused, TemplateSource::OnlineBackup, TemplateSource::Online,
                 TemplateSource::Infeasible}) {
    if (source_name(s) == name) return s;
  }
  throw InputError("unknown template source '" + std::string(name) + "'");
}

MonotonicClock steady_clock_source() {
  return [] { return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch()); };
}

ScheduleOutcome hybrid_schedule(const TaskGraph& task, const ServiceGraph& serv, const std::optional<Template>& a_off,
                                const Realization& real, const CostWeights& w, const HybridOptions& opts) {
  w.validate();
  ScheduleOutcome out;
  const auto start = opts.clock();
  if (a_off && check_template_validity(task, serv, *a_off, real)) {
    out.tmpl = *a_off;
    out.source = TemplateSource::OfflineReused;
  } else {
    std::optional<Template> backup;
    if (opts.backup == BackupSearch::Ets) {
      backup = ets(task, serv, real, w, opts.ets_cap);
    } else {
      backup = te_insta_iss(task, serv, real, w).tmpl;
    }
    out.tmpl = std::move(backup);
    out.source = out.tmpl ? TemplateSource::OnlineBackup : TemplateSource::Infeasible;
  }
  const auto stop = opts.clock();
  out.decision_time = std::chrono::duration<double>(stop - start).count();
  if (out.tmpl) out.cf = cost_function(task, serv, *out.tmpl, real, w);
  return out;
}

}  // namespace vcsched
