#include "vcsched/cost.hpp"

#include <algorithm>
#include <string>

namespace vcsched {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + ": expected " + std::to_string(want) + " entries, got " +
                     std::to_string(got));
  }
}

}  // namespace

StatModel::StatModel(const ServiceGraph& serv, std::vector<DistributionSpec> f, std::vector<DistributionSpec> r,
                     std::vector<DistributionSpec> t_conn, std::vector<DistributionSpec> c_exch)
    : f_(std::move(f)), r_(std::move(r)), t_conn_(std::move(t_conn)), c_exch_(std::move(c_exch)) {
  require_size(f_.size(), serv.size(), "f specs");
  require_size(r_.size(), serv.size(), "r specs");
  require_size(t_conn_.size(), serv.topology().edge_count(), "t_conn specs");
  require_size(c_exch_.size(), serv.topology().edge_count(), "c_exch specs");
  inv_f_.reserve(f_.size());
  inv_r_.reserve(r_.size());
  for (NodeId m = 0; m < f_.size(); ++m) {
    inv_f_.push_back(expected_reciprocal(f_[m]));
    inv_r_.push_back(expected_reciprocal(r_[m]));
  }
  c_mean_.reserve(c_exch_.size());
  for (const auto& c : c_exch_) c_mean_.push_back(c.mean());
}

void CostWeights::validate() const {
  if (!(lambda_t >= 0.0) || !(lambda_c >= 0.0)) throw InputError("cost weights must be non-negative");
  if (lambda_t == 0.0 && lambda_c == 0.0) throw InputError("cost weights must not both be zero");
}

double completion_time(double q, double d, double f, double r) {
  if (!(f > 0.0)) throw InputError("completion_time: f must be > 0");
  if (d == 0.0) return q / f;
  if (!(r > 0.0)) throw InputError("completion_time: r must be > 0 when d > 0");
  return q / f + d / r;
}

BetaMatrix derive_beta(const TaskGraph& task, const ServiceGraph& serv, const Template& t) {
  require_structurally_valid(task, serv, t);
  BetaMatrix beta;
  beta.pairs.reserve(task.topology().edge_count());
  for (const NodePair& e : task.topology().edges()) {
    beta.pairs.push_back(NodePair::of(t.assignment[e.first], t.assignment[e.second]));
  }
  std::sort(beta.pairs.begin(), beta.pairs.end());
  beta.pairs.erase(std::unique(beta.pairs.begin(), beta.pairs.end()), beta.pairs.end());
  return beta;
}

void require_realization_shape(const ServiceGraph& serv, const Realization& real) {
  require_size(real.f.size(), serv.size(), "realization f");
  require_size(real.r.size(), serv.size(), "realization r");
  require_size(real.t_conn.size(), serv.topology().edge_count(), "realization t_conn");
  require_size(real.c_exch.size(), serv.topology().edge_count(), "realization c_exch");
}

double task_completion_time(const TaskGraph& task, const Template& t, const Realization& real) {
  require_size(t.assignment.size(), task.size(), "template");
  double worst = 0.0;
  for (NodeId n = 0; n < task.size(); ++n) {
    const NodeId m = t.assignment[n];
    if (m >= real.f.size() || m >= real.r.size()) {
      throw InputError("realization has no entry for SP " + std::to_string(m));
    }
    const TaskComponent& c = task.component(n);
    worst = std::max(worst, completion_time(c.q, c.d, real.f[m], real.r[m]));
  }
  return worst;
}

double data_exchange_cost(const ServiceGraph& serv, const BetaMatrix& beta, const Realization& real) {
  double total = 0.0;
  for (const NodePair& p : beta.pairs) {
    const auto e = serv.topology().edge_id(p.first, p.second);
    if (!e) {
      throw InputError("beta pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                       ") is not a service edge");
    }
    total += real.c_exch.at(*e);
  }
  return total;
}

double cost_function(const TaskGraph& task, const ServiceGraph& serv, const Template& t, const Realization& real,
                     const CostWeights& w) {
  const BetaMatrix beta = derive_beta(task, serv, t);
  return w.lambda_t * task_completion_time(task, t, real) + w.lambda_c * data_exchange_cost(serv, beta, real);
}

double expected_completion_time(const TaskComponent& comp, NodeId sp, const StatModel& model) {
  return model.inv_f_mean(sp) * comp.q + model.inv_r_mean(sp) * comp.d;
}

double expected_task_completion_time(const TaskGraph& task, const Template& t, const StatModel& model) {
  require_size(t.assignment.size(), task.size(), "template");
  double worst = 0.0;
  for (NodeId n = 0; n < task.size(); ++n) {
    worst = std::max(worst, expected_completion_time(task.component(n), t.assignment[n], model));
  }
  return worst;
}

double expected_exchange_cost(const ServiceGraph& serv, const BetaMatrix& beta, const StatModel& model) {
  double total = 0.0;
  for (const NodePair& p : beta.pairs) {
    const auto e = serv.topology().edge_id(p.first, p.second);
    if (!e) {
      throw InputError("beta pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                       ") is not a service edge");
    }
    total += model.c_exch_mean(*e);
  }
  return total;
}

double expected_cost_function(const TaskGraph& task, const ServiceGraph& serv, const Template& t,
                              const StatModel& model, const CostWeights& w) {
  const BetaMatrix beta = derive_beta(task, serv, t);
  return w.lambda_t * expected_task_completion_time(task, t, model) +
         w.lambda_c * expected_exchange_cost(serv, beta, model);
}

McEstimate mc_expected_task_completion_time(const TaskGraph& task, const Template& t, const StatModel& model,
                                            std::size_t n, SeededRng& rng) {
  require_size(t.assignment.size(), task.size(), "template");
  if (n == 0) throw InputError("mc_expected_task_completion_time: n must be >= 1");
  // Draw vector layout: f of each component's SP, then r of each.
  std::vector<DistributionSpec> specs;
  const std::size_t k = task.size();
  for (NodeId c = 0; c < k; ++c) specs.push_back(model.f().at(t.assignment[c]));
  for (NodeId c = 0; c < k; ++c) specs.push_back(model.r().at(t.assignment[c]));
  return mc_estimate(
      specs,
      [&](std::span<const double> x) {
        double worst = 0.0;
        for (NodeId c = 0; c < k; ++c) {
          const TaskComponent& comp = task.component(c);
          worst = std::max(worst, completion_time(comp.q, comp.d, x[c], x[k + c]));
        }
        return worst;
      },
      n, rng);
}

}  // namespace vcsched
