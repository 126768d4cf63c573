#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "vcsched/baselines.hpp"

using namespace vcsched;

namespace {

struct Instance {
  TaskGraph task;
  ServiceGraph serv;
  Realization real;
};

Instance random_instance(std::uint64_t seed) {
  oracle::Rng rng(seed);
  TaskGraph task = oracle::random_task(3 + rng.index(3), rng);
  ServiceGraph serv = oracle::random_service(task.size() + rng.index(4), rng, 0.6);
  const StatModel model = oracle::random_model(serv, rng);
  Realization real = oracle::draw_realization(model, rng);
  return {std::move(task), std::move(serv), std::move(real)};
}

// Every SP fast enough for every component, and every contact long enough.
Realization generous(const ServiceGraph& serv) {
  Realization r;
  r.f.assign(serv.size(), 4e9);
  r.r.assign(serv.size(), 8e6);
  r.t_conn.assign(serv.topology().edge_count(), 60.0);
  r.c_exch.assign(serv.topology().edge_count(), 0.05);
  return r;
}

}  // namespace

TEST_CASE("injective assignment count") {
  CHECK(injective_assignment_count(5, 3) == 60);
  CHECK(injective_assignment_count(3, 5) == 0);
  CHECK(injective_assignment_count(7, 0) == 1);
  CHECK(injective_assignment_count(14, 7) == 17'297'280);
  CHECK(injective_assignment_count(1000, 100) == std::numeric_limits<std::size_t>::max());
}

TEST_CASE("ETS returns the lexicographically first exhaustive optimum") {
  const CostWeights w{0.5, 0.5};
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Instance in = random_instance(seed);
    const auto brute = oracle::brute_online(in.task, in.serv, in.real, w);
    CHECK(ets(in.task, in.serv, in.real, w) == brute.best);
  }
}

TEST_CASE("ETS refuses oversized spaces") {
  const Instance in = random_instance(2);
  const std::size_t space = injective_assignment_count(in.serv.size(), in.task.size());
  CHECK_THROWS_AS(ets(in.task, in.serv, in.real, CostWeights{}, space - 1), EtsCapExceeded);
  CHECK_NOTHROW(ets(in.task, in.serv, in.real, CostWeights{}, space));
}

TEST_CASE("DFS order is a preorder from component 0") {
  // 0-1, 0-3, 1-2, 3-4: neighbors ascending gives 0,1,2,3,4.
  const TaskGraph task({{1, 1e8, 1e5}, {1, 1e8, 1e5}, {1, 1e8, 1e5}, {1, 1e8, 1e5}, {1, 1e8, 1e5}},
                       std::vector<TaskEdge>{{0, 3, 1}, {0, 1, 1}, {3, 4, 1}, {1, 2, 1}});
  CHECK(dfs_order(task) == std::vector<NodeId>{0, 1, 2, 3, 4});
  const TaskGraph star({{1, 1e8, 1e5}, {1, 1e8, 1e5}, {1, 1e8, 1e5}},
                       std::vector<TaskEdge>{{2, 0, 1}, {2, 1, 1}});
  CHECK(dfs_order(star) == std::vector<NodeId>{0, 2, 1});
}

TEST_CASE("heuristics return valid templates or nothing") {
  const CostWeights w;
  std::size_t found = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Instance in = random_instance(seed);
    SeededRng rng(seed);
    const auto brute = oracle::brute_online(in.task, in.serv, in.real, w);
    for (const auto& t : {tpts(in.task, in.serv, in.real, w), dpts(in.task, in.serv, in.real, w),
                          rts(in.task, in.serv, in.real, w, rng)}) {
      if (!t) continue;
      ++found;
      CHECK(oracle::realized_valid(in.task, in.serv, *t, in.real));
      // No heuristic beats the exhaustive optimum.
      CHECK(oracle::realized_cf(in.task, in.serv, *t, in.real, w) >= brute.cost - 1e-12);
    }
    if (!brute.best) {
      CHECK_FALSE(tpts(in.task, in.serv, in.real, w).has_value());
      CHECK_FALSE(dpts(in.task, in.serv, in.real, w).has_value());
    }
  }
  CHECK(found > 30);
}

TEST_CASE("TPTS places the first component on the fastest SP") {
  oracle::Rng rng(17);
  const TaskGraph task = oracle::random_task(3, rng);
  const ServiceGraph serv = oracle::random_service(6, rng, 1.0);
  Realization real = generous(serv);
  real.f[4] = 4.5e9;
  const auto t = tpts(task, serv, real, CostWeights{});
  REQUIRE(t.has_value());
  CHECK(t->assignment[0] == 4);
}

TEST_CASE("DPTS places the first component on the highest-degree SP") {
  // Star centred on SP 3 plus a pendant chain.
  const ServiceGraph serv(6, std::vector<NodePair>{{3, 0}, {3, 1}, {3, 2}, {3, 4}, {4, 5}});
  const TaskGraph task({{1, 1e8, 1e5}, {1, 1e8, 1e5}}, std::vector<TaskEdge>{{0, 1, 1}});
  const auto t = dpts(task, serv, generous(serv), CostWeights{});
  REQUIRE(t.has_value());
  CHECK(t->assignment[0] == 3);
  CHECK(t->assignment[1] == 4);
}

TEST_CASE("RTS is reproducible for a fixed stream") {
  const Instance in = random_instance(8);
  SeededRng a(99), b(99);
  CHECK(rts(in.task, in.serv, in.real, CostWeights{}, a) == rts(in.task, in.serv, in.real, CostWeights{}, b));
}
