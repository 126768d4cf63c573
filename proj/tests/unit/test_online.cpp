#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "vcsched/baselines.hpp"
#include "vcsched/online.hpp"

using namespace vcsched;

namespace {

struct Instance {
  TaskGraph task;
  ServiceGraph serv;
  StatModel model;
  Realization real;
};

Instance random_instance(std::uint64_t seed) {
  oracle::Rng rng(seed);
  TaskGraph task = oracle::random_task(3 + rng.index(3), rng);
  ServiceGraph serv = oracle::random_service(task.size() + rng.index(4), rng, 0.6);
  StatModel model = oracle::random_model(serv, rng);
  Realization real = oracle::draw_realization(model, rng);
  return {std::move(task), std::move(serv), std::move(model), std::move(real)};
}

// Advances by a fixed step on every reading.
MonotonicClock stepping_clock(std::chrono::nanoseconds step) {
  auto now = std::make_shared<std::chrono::nanoseconds>(0);
  return [now, step] {
    *now += step;
    return *now;
  };
}

}  // namespace

TEST_CASE("te_insta_iss finds the exhaustive optimum") {
  const CostWeights w{0.5, 0.5};
  std::size_t hits = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const Instance in = random_instance(seed);
    const auto brute = oracle::brute_online(in.task, in.serv, in.real, w);
    const OnlineResult res = te_insta_iss(in.task, in.serv, in.real, w);
    REQUIRE(res.feasible() == brute.best.has_value());
    CHECK(res.candidate_count == brute.feasible);
    if (!res.feasible()) continue;
    ++hits;
    CHECK(oracle::realized_valid(in.task, in.serv, *res.tmpl, in.real));
    CHECK(res.cost == doctest::Approx(brute.cost).epsilon(1e-12));
    CHECK(oracle::realized_cf(in.task, in.serv, *res.tmpl, in.real, w) == doctest::Approx(res.cost).epsilon(1e-12));
  }
  CHECK(hits > 20);
}

TEST_CASE("te_insta_iss agrees with ETS on cost") {
  const CostWeights w{0.3, 0.7};
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    const Instance in = random_instance(seed);
    const OnlineResult res = te_insta_iss(in.task, in.serv, in.real, w);
    const auto e = ets(in.task, in.serv, in.real, w);
    REQUIRE(res.feasible() == e.has_value());
    if (e) CHECK(res.cost == doctest::Approx(cost_function(in.task, in.serv, *e, in.real, w)).epsilon(1e-12));
  }
}

TEST_CASE("template validity matches the direct check") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance in = random_instance(seed);
    for (const Template& t : oracle::injective_templates(in.task.size(), in.serv.size())) {
      CHECK(check_template_validity(in.task, in.serv, t, in.real) ==
            oracle::realized_valid(in.task, in.serv, t, in.real));
    }
  }
}

TEST_CASE("template validity rejects malformed templates") {
  const Instance in = random_instance(3);
  CHECK_THROWS_AS(check_template_validity(in.task, in.serv, Template{{0}}, in.real), InputError);
  std::vector<NodeId> a(in.task.size(), 0);
  a.back() = static_cast<NodeId>(in.serv.size());
  CHECK_THROWS_AS(check_template_validity(in.task, in.serv, Template{a}, in.real), InputError);
}

TEST_CASE("hybrid schedule reuses, falls back, or reports infeasibility") {
  const CostWeights w;
  HybridOptions opts;
  opts.clock = stepping_clock(std::chrono::milliseconds(3));
  std::size_t reused = 0, backup = 0, none = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Instance in = random_instance(seed);
    const auto brute = oracle::brute_online(in.task, in.serv, in.real, w);
    // A valid template when one exists, otherwise the first injective one.
    const auto all = oracle::injective_templates(in.task.size(), in.serv.size());
    const bool use_valid = seed % 2 == 0 && brute.best;
    const Template a_off = use_valid ? *brute.best : all.front();
    const ScheduleOutcome out = hybrid_schedule(in.task, in.serv, a_off, in.real, w, opts);
    CHECK(out.decision_time == doctest::Approx(0.003));
    if (oracle::realized_valid(in.task, in.serv, a_off, in.real)) {
      ++reused;
      CHECK(out.source == TemplateSource::OfflineReused);
      CHECK(out.tmpl == a_off);
    } else if (brute.best) {
      ++backup;
      CHECK(out.source == TemplateSource::OnlineBackup);
      REQUIRE(out.cf.has_value());
      CHECK(*out.cf == doctest::Approx(brute.cost).epsilon(1e-12));
    } else {
      ++none;
      CHECK(out.source == TemplateSource::Infeasible);
      CHECK_FALSE(out.tmpl.has_value());
      CHECK_FALSE(out.cf.has_value());
    }
    if (out.tmpl) CHECK(*out.cf == doctest::Approx(cost_function(in.task, in.serv, *out.tmpl, in.real, w)));
  }
  CHECK(reused > 0);
  CHECK(backup > 0);
  CHECK(none > 0);
}

TEST_CASE("hybrid schedule without an offline template goes straight to backup") {
  const Instance in = random_instance(11);
  const CostWeights w;
  const ScheduleOutcome a = hybrid_schedule(in.task, in.serv, std::nullopt, in.real, w);
  HybridOptions opts;
  opts.backup = BackupSearch::Ets;
  const ScheduleOutcome b = hybrid_schedule(in.task, in.serv, std::nullopt, in.real, w, opts);
  CHECK(a.source != TemplateSource::OfflineReused);
  CHECK(a.source == b.source);
  if (a.cf) CHECK(*a.cf == doctest::Approx(*b.cf).epsilon(1e-12));
  CHECK(a.decision_time >= 0.0);
}

TEST_CASE("source names round trip") {
  for (TemplateSource s : {TemplateSource::OfflineReused, TemplateSource::OnlineBackup, TemplateSource::Online,
                           TemplateSource::Infeasible}) {
    CHECK(parse_source(source_name(s)) == s);
  }
  CHECK(source_name(TemplateSource::OfflineReused) == "offline_reused");
  CHECK_THROWS_AS(parse_source("bogus"), InputError);
}

TEST_CASE("realized admission reflects the realization") {
  const Instance in = random_instance(5);
  const Admission adm = realized_admission(in.task, in.serv, in.real);
  for (NodeId n = 0; n < in.task.size(); ++n) {
    const TaskComponent& c = in.task.component(n);
    for (NodeId m = 0; m < in.serv.size(); ++m) {
      CHECK(adm.node_ok(n, m) == (c.q / in.real.f[m] + c.d / in.real.r[m] <= c.t_max));
    }
  }
}
