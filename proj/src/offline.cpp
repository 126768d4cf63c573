#include "vcsched/offline.hpp"

namespace vcsched {

void RiskConfig::validate() const {
  if (!(xi > 0.0 && xi <= 1.0)) throw InputError("xi must lie in (0, 1]");
  if (!(xi_prime > 0.0 && xi_prime <= 1.0)) throw InputError("xi_prime must lie in (0, 1]");
}

RiskTable::RiskTable(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model)
    : components_(task.size()),
      providers_(serv.size()),
      task_edges_(task.topology().edge_count()),
      serv_edges_(serv.topology().edge_count()) {
  if (model.provider_count() != providers_ || model.edge_count() != serv_edges_) {
    throw InputError("statistics model does not match the service graph");
  }
  time_.resize(components_ * providers_);
  for (NodeId n = 0; n < components_; ++n) {
    const TaskComponent& c = task.component(n);
    for (NodeId m = 0; m < providers_; ++m) {
      time_[n * providers_ + m] = risk_time(model.f()[m], model.r()[m], c.q, c.d, c.t_max);
    }
  }
  struct_.resize(task_edges_ * serv_edges_);
  for (EdgeId te = 0; te < task_edges_; ++te) {
    for (EdgeId se = 0; se < serv_edges_; ++se) {
      struct_[te * serv_edges_ + se] = risk_struct(model.t_conn()[se], task.w_task(te));
    }
  }
}

Admission RiskTable::admission(const RiskConfig& risk) const {
  risk.validate();
  Admission a(components_, providers_, task_edges_, serv_edges_);
  for (NodeId n = 0; n < components_; ++n) {
    for (NodeId m = 0; m < providers_; ++m) a.set_node(n, m, time_risk(n, m) <= risk.xi);
  }
  for (EdgeId te = 0; te < task_edges_; ++te) {
    for (EdgeId se = 0; se < serv_edges_; ++se) a.set_edge(te, se, struct_risk(te, se) <= risk.xi_prime);
  }
  return a;
}

PivotSelection pivot_select_offline(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model,
                                    const RiskConfig& risk) {
  return select_pivot(task, serv, RiskTable(task, serv, model).admission(risk));
}

std::optional<AltMap> region_explore_offline(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot,
                                             NodeId anchor, const StatModel& model, const RiskConfig& risk) {
  return explore_region(task, serv, pivot, anchor, RiskTable(task, serv, model).admission(risk));
}

CandidateSet subg_search_offline(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candi,
                                 const StatModel& model, const RiskConfig& risk, Enumeration mode) {
  return search_subgraphs(task, serv, candi, RiskTable(task, serv, model).admission(risk), mode);
}

std::optional<Selection> opt_select_offline(const TaskGraph& task, const ServiceGraph& serv, const CandidateSet& cands,
                                            const StatModel& model, const CostWeights& w) {
  w.validate();
  return select_minimum(cands, [&](const Template& t) { return expected_cost_function(task, serv, t, model, w); });
}

OfflineResult ra_pilot_iss(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model,
                           const RiskConfig& risk, const CostWeights& w, Enumeration mode) {
  w.validate();
  const Admission admission = RiskTable(task, serv, model).admission(risk);
  EnumerationResult found = enumerate_templates(task, serv, admission, mode);
  OfflineResult out;
  out.pivot = std::move(found.pivot);
  out.candidates = std::move(found.candidates);
  if (const auto best = opt_select_offline(task, serv, out.candidates, model, w)) {
    out.tmpl = best->tmpl;
    out.expected_cost = best->cost;
  }
  return out;
}

}  // namespace vcsched
