#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vcsched/cost.hpp"

using namespace vcsched;
using doctest::Approx;

namespace {

struct Instance {
  TaskGraph task;
  ServiceGraph serv;
  StatModel model;
};

Instance random_instance(std::uint64_t seed, bool deterministic = false) {
  oracle::Rng rng(seed);
  TaskGraph task = oracle::random_task(3 + rng.index(3), rng);
  ServiceGraph serv = oracle::random_service(task.size() + 3, rng, 0.9);
  StatModel model = oracle::random_model(serv, rng, deterministic);
  return {std::move(task), std::move(serv), std::move(model)};
}

/// First structurally valid template in lexicographic order.
Template some_template(const Instance& in) {
  for (const Template& t : oracle::injective_templates(in.task.size(), in.serv.size())) {
    if (oracle::edge_preserving(in.task, in.serv, t)) return t;
  }
  FAIL("no embedding");
  return {};
}

}  // namespace

TEST_CASE("completion time") {
  CHECK(completion_time(3e9, 6e6, 3e9, 6e6) == Approx(2.0));
  CHECK(completion_time(3e9, 0.0, 3e9, 0.0) == Approx(1.0));  // rate unused without data
  CHECK_THROWS_AS(completion_time(1.0, 1.0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(completion_time(1.0, 1.0, 1.0, 0.0), InputError);
}

TEST_CASE("cost weights") {
  CHECK_NOTHROW(CostWeights{0.0, 1.0}.validate());
  CHECK_THROWS_AS((CostWeights{0.0, 0.0}.validate()), InputError);
  CHECK_THROWS_AS((CostWeights{-0.1, 1.0}.validate()), InputError);
}

TEST_CASE("beta holds one sorted pair per task edge") {
  const std::vector<TaskComponent> comps(3, TaskComponent{1.0, 1e8, 1e5});
  const std::vector<TaskEdge> path{{0, 1, 1.0}, {1, 2, 1.0}};
  const TaskGraph task(comps, path);
  const std::vector<NodePair> se{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const ServiceGraph serv(4, se);
  const BetaMatrix beta = derive_beta(task, serv, Template{{3, 0, 1}});
  CHECK(beta.pairs == std::vector<NodePair>{{0, 1}, {0, 3}});
  CHECK_THROWS_AS(derive_beta(task, serv, Template{{3, 1, 0}}), InputError);  // 3-1 is not a service edge
}

TEST_CASE("realized costs match the definitions") {
  const CostWeights w{0.3, 0.7};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance in = random_instance(seed);
    oracle::Rng rng(seed + 1000);
    const Realization real = oracle::draw_realization(in.model, rng);
    const Template t = some_template(in);
    CHECK(task_completion_time(in.task, t, real) == Approx(oracle::realized_tct(in.task, t, real)).epsilon(1e-14));
    CHECK(data_exchange_cost(in.serv, derive_beta(in.task, in.serv, t), real) ==
          Approx(oracle::realized_dec(in.task, in.serv, t, real)).epsilon(1e-14));
    CHECK(cost_function(in.task, in.serv, t, real, w) ==
          Approx(oracle::realized_cf(in.task, in.serv, t, real, w)).epsilon(1e-14));
  }
}

TEST_CASE("expected costs match numerical integration") {
  const CostWeights w{0.5, 0.5};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = random_instance(seed);
    const Template t = some_template(in);
    CHECK(expected_cost_function(in.task, in.serv, t, in.model, w) ==
          Approx(oracle::expected_cf(in.task, in.serv, t, in.model, w)).epsilon(1e-9));
    for (NodeId m = 0; m < in.serv.size(); ++m) {
      const TaskComponent& c = in.task.component(0);
      CHECK(expected_completion_time(c, m, in.model) ==
            Approx(c.q * oracle::mean_reciprocal(in.model.f()[m]) + c.d * oracle::mean_reciprocal(in.model.r()[m]))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("deterministic models: expectation equals the realized value") {
  const CostWeights w{0.5, 0.5};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = random_instance(seed, true);
    SeededRng rng(seed);
    Realization real;
    for (NodeId m = 0; m < in.serv.size(); ++m) {
      real.f.push_back(in.model.f()[m].value());
      real.r.push_back(in.model.r()[m].value());
    }
    for (EdgeId e = 0; e < in.serv.topology().edge_count(); ++e) {
      real.t_conn.push_back(in.model.t_conn()[e].value());
      real.c_exch.push_back(in.model.c_exch()[e].value());
    }
    const Template t = some_template(in);
    CHECK(std::abs(expected_cost_function(in.task, in.serv, t, in.model, w) -
                   cost_function(in.task, in.serv, t, real, w)) < 1e-12);
    const McEstimate mc = mc_expected_task_completion_time(in.task, t, in.model, 100, rng);
    CHECK(std::abs(mc.mean - expected_task_completion_time(in.task, t, in.model)) < 1e-12);
  }
}

TEST_CASE("max of expectations never exceeds the expected max") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = random_instance(seed);
    const Template t = some_template(in);
    SeededRng rng(seed);
    const McEstimate mc = mc_expected_task_completion_time(in.task, t, in.model, 20000, rng);
    CHECK(expected_task_completion_time(in.task, t, in.model) <= mc.mean + 3.0 * mc.std_error);
  }
}

TEST_CASE("shape checks") {
  const Instance in = random_instance(3);
  oracle::Rng rng(3);
  Realization real = oracle::draw_realization(in.model, rng);
  CHECK_NOTHROW(require_realization_shape(in.serv, real));
  real.c_exch.pop_back();
  CHECK_THROWS_AS(require_realization_shape(in.serv, real), InputError);

  std::vector<DistributionSpec> f(in.serv.size() - 1, DistributionSpec::deterministic(1e9));
  CHECK_THROWS_AS(StatModel(in.serv, f, in.model.r(), in.model.t_conn(), in.model.c_exch()), InputError);
}
