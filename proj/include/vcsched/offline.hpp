#pragma once

#include <optional>

#include "vcsched/cost.hpp"
#include "vcsched/search.hpp"

namespace vcsched {

/// Chance-constraint budgets: xi bounds the overtime risk of each placed
/// component, xi_prime the contact-failure risk of each used SP pair.
struct RiskConfig {
  double xi = 0.05;
  double xi_prime = 0.05;

  /// Throws InputError unless both lie in (0, 1].
  void validate() const;
};

/// Overtime and contact-failure risks for every (component, SP) and every
/// (task edge, service edge) combination.
class RiskTable {
 public:
  RiskTable(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model);

  double time_risk(NodeId comp, NodeId sp) const { return time_[comp * providers_ + sp]; }
  double struct_risk(EdgeId task_edge, EdgeId serv_edge) const { return struct_[task_edge * serv_edges_ + serv_edge]; }
  Admission admission(const RiskConfig& risk) const;

 private:
  std::size_t components_;
  std::size_t providers_;
  std::size_t task_edges_;
  std::size_t serv_edges_;
  std::vector<double> time_;
  std::vector<double> struct_;
};

PivotSelection pivot_select_offline(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model,
                                    const RiskConfig& risk);

std::optional<AltMap> region_explore_offline(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot,
                                             NodeId anchor, const StatModel& model, const RiskConfig& risk);

CandidateSet subg_search_offline(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candi,
                                 const StatModel& model, const RiskConfig& risk,
                                 Enumeration mode = Enumeration::FailFirst);

/// Candidate with the smallest expected cost; std::nullopt when empty.
std::optional<Selection> opt_select_offline(const TaskGraph& task, const ServiceGraph& serv, const CandidateSet& cands,
                                            const StatModel& model, const CostWeights& w);

struct OfflineResult {
  std::optional<Template> tmpl;  // std::nullopt = infeasible
  double expected_cost = 0.0;
  PivotSelection pivot;
  CandidateSet candidates;

  bool feasible() const { return tmpl.has_value(); }
};

/// Risk-aware pilot search: the template minimizing expected cost among all
/// templates meeting the chance constraints.
OfflineResult ra_pilot_iss(const TaskGraph& task, const ServiceGraph& serv, const StatModel& model,
                           const RiskConfig& risk, const CostWeights& w, Enumeration mode = Enumeration::FailFirst);

}  // namespace vcsched
