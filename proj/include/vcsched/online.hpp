#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string_view>

#include "vcsched/cost.hpp"
#include "vcsched/search.hpp"

namespace vcsched {

/// Placement admissible iff the realized completion time meets t_max; carrier
/// admissible iff the realized contact covers w_task.
Admission realized_admission(const TaskGraph& task, const ServiceGraph& serv, const Realization& real);

PivotSelection pivot_select_online(const TaskGraph& task, const ServiceGraph& serv, const Realization& real);

std::optional<AltMap> region_explore_online(const TaskGraph& task, const ServiceGraph& serv, NodeId pivot,
                                            NodeId anchor, const Realization& real);

CandidateSet subg_search_online(const TaskGraph& task, const ServiceGraph& serv, const AltMap& candi,
                                const Realization& real, Enumeration mode = Enumeration::FailFirst);

std::optional<Selection> opt_select_online(const TaskGraph& task, const ServiceGraph& serv, const CandidateSet& cands,
                                           const Realization& real, const CostWeights& w);

struct OnlineResult {
  std::optional<Template> tmpl;  // std::nullopt = infeasible
  double cost = 0.0;
  std::size_t candidate_count = 0;

  bool feasible() const { return tmpl.has_value(); }
};

/// Exact minimum realized cost over all templates meeting the deadline and
/// contact constraints of this realization.
OnlineResult te_insta_iss(const TaskGraph& task, const ServiceGraph& serv, const Realization& real,
                          const CostWeights& w);

/// True iff `a_off` is still a monomorphism of the current service graph, every
/// component meets its deadline and every used SP pair's contact covers the
/// exchange. Throws InputError for a template of the wrong shape.
bool check_template_validity(const TaskGraph& task, const ServiceGraph& serv, const Template& a_off,
                             const Realization& real);

enum class TemplateSource { OfflineReused, OnlineBackup, Online, Infeasible };

std::string_view source_name(TemplateSource s);
/// Throws InputError for unknown names.
TemplateSource parse_source(std::string_view name);

struct ScheduleOutcome {
  std::optional<Template> tmpl;
  TemplateSource source = TemplateSource::Infeasible;
  double decision_time = 0.0;  // seconds
  std::optional<double> cf;
};

/// Monotonic time source returning elapsed time since an arbitrary origin.
using MonotonicClock = std::function<std::chrono::nanoseconds()>;
MonotonicClock steady_clock_source();

enum class BackupSearch { InstaIss, Ets };

struct HybridOptions {
  BackupSearch backup = BackupSearch::InstaIss;
  MonotonicClock clock = steady_clock_source();
  std::size_t ets_cap = 100'000'000;
};

/// Reuse `a_off` when it is valid under `real`, otherwise fall back to the
/// online search. `decision_time` covers the validity check plus any backup.
ScheduleOutcome hybrid_schedule(const TaskGraph& task, const ServiceGraph& serv, const std::optional<Template>& a_off,
                                const Realization& real, const CostWeights& w, const HybridOptions& opts = {});

}  // namespace vcsched
