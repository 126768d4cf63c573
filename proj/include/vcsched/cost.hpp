#pragma once

#include <vector>

#include "vcsched/graph.hpp"
#include "vcsched/stochastic.hpp"

namespace vcsched {

/// Per-SP and per-service-edge laws of the uncertain quantities.
///
/// Base units: f in Hz, r in bit/s, t_conn in seconds, c_exch in cost units.
/// Edge vectors are indexed by the service graph's edge ids. Reciprocal
/// moments and edge-cost means are computed once at construction.
class StatModel {
 public:
  StatModel() = default;
  StatModel(const ServiceGraph& serv, std::vector<DistributionSpec> f, std::vector<DistributionSpec> r,
            std::vector<DistributionSpec> t_conn, std::vector<DistributionSpec> c_exch);

  const std::vector<DistributionSpec>& f() const { return f_; }
  const std::vector<DistributionSpec>& r() const { return r_; }
  const std::vector<DistributionSpec>& t_conn() const { return t_conn_; }
  const std::vector<DistributionSpec>& c_exch() const { return c_exch_; }
  std::size_t provider_count() const { return f_.size(); }
  std::size_t edge_count() const { return t_conn_.size(); }

  /// E[1/f_m] and E[1/r_m].
  double inv_f_mean(NodeId m) const { return inv_f_.at(m); }
  double inv_r_mean(NodeId m) const { return inv_r_.at(m); }
  double c_exch_mean(EdgeId e) const { return c_mean_.at(e); }

 private:
  std::vector<DistributionSpec> f_, r_, t_conn_, c_exch_;
  std::vector<double> inv_f_, inv_r_, c_mean_;
};

/// One concrete draw of every uncertain quantity at a scheduling event.
struct Realization {
  std::vector<double> f;       // per SP, Hz
  std::vector<double> r;       // per SP, bit/s
  std::vector<double> t_conn;  // per service edge, seconds
  std::vector<double> c_exch;  // per service edge

  friend bool operator==(const Realization&, const Realization&) = default;
};

struct CostWeights {
  double lambda_t = 0.5;
  double lambda_c = 0.5;

  /// Throws InputError unless both are >= 0 and not both 0.
  void validate() const;
};

/// SP pairs that must exchange data under a template (beta = 1), sorted.
struct BetaMatrix {
  std::vector<NodePair> pairs;
};

/// q/f + d/r. The transfer term is dropped when d == 0.
double completion_time(double q, double d, double f, double r);

BetaMatrix derive_beta(const TaskGraph& task, const ServiceGraph& serv, const Template& t);

/// Longest realized completion time over all components.
double task_completion_time(const TaskGraph& task, const Template& t, const Realization& real);

/// Sum of c_exch over beta pairs; each pair must be a service edge.
double data_exchange_cost(const ServiceGraph& serv, const BetaMatrix& beta, const Realization& real);

double cost_function(const TaskGraph& task, const ServiceGraph& serv, const Template& t, const Realization& real,
                     const CostWeights& w);

/// E[1/f]·q + E[1/r]·d for one component on SP `sp`.
double expected_completion_time(const TaskComponent& comp, NodeId sp, const StatModel& model);

/// Max of per-component expectations. A lower bound on E[max].
double expected_task_completion_time(const TaskGraph& task, const Template& t, const StatModel& model);

double expected_exchange_cost(const ServiceGraph& serv, const BetaMatrix& beta, const StatModel& model);

double expected_cost_function(const TaskGraph& task, const ServiceGraph& serv, const Template& t,
                              const StatModel& model, const CostWeights& w);

/// Monte-Carlo estimate of E[max_n t_sum] over joint draws of f and r.
McEstimate mc_expected_task_completion_time(const TaskGraph& task, const Template& t, const StatModel& model,
                                            std::size_t n, SeededRng& rng);

/// Throws InputError unless every vector of `real` matches the graph sizes.
void require_realization_shape(const ServiceGraph& serv, const Realization& real);

}  // namespace vcsched
