#include "vcsched/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "vcsched/baselines.hpp"
#include "vcsched/io.hpp"

namespace vcsched {

namespace {

// Child-stream keys under a simulation's stream.
constexpr std::uint64_t kTopologyStream = 0;
constexpr std::uint64_t kStatisticsStream = 1;
constexpr std::uint64_t kFirstEventStream = 16;
// Under an event's stream.
constexpr std::uint64_t kRealizationStream = 0;
constexpr std::uint64_t kRandomBaselineStream = 1;

double draw(const Range& r, SeededRng& rng) { return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi); }

void require_range(const Range& r, const char* name) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi)) {
    throw InputError(std::string("scenario: range '") + name + "' must satisfy lo <= hi");
  }
}

SeededRng simulation_stream(const ScenarioSpec& spec, std::size_t simulation) {
  return SeededRng(spec.seed).child(simulation);
}

SeededRng event_stream(const ScenarioSpec& spec, std::size_t simulation, std::size_t local_event) {
  return simulation_stream(spec, simulation).child(kFirstEventStream + local_event);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void fill_metrics(EventRecord& rec, const SimulationContext& sim, const Realization& real, const CostWeights& w) {
  if (!rec.tmpl) return;
  rec.tct = task_completion_time(sim.task, *rec.tmpl, real);
  rec.dec = data_exchange_cost(sim.serv, derive_beta(sim.task, sim.serv, *rec.tmpl), real);
  rec.cf = cost_function(sim.task, sim.serv, *rec.tmpl, real, w);
}

EventRecord run_algorithm(Algorithm algo, const ScenarioSpec& spec, const SimulationContext& sim,
                          const Realization& real, SeededRng& random_baseline) {
  EventRecord rec;
  rec.algo = algo;
  if (algo == Algorithm::Phts) {
    HybridOptions opts;
    opts.ets_cap = spec.ets_cap;
    const ScheduleOutcome out = hybrid_schedule(sim.task, sim.serv, sim.offline.tmpl, real, spec.weights, opts);
    rec.tmpl = out.tmpl;
    rec.source = out.source;
    rec.rt_seconds = out.decision_time;
  } else {
    const auto start = std::chrono::steady_clock::now();
    switch (algo) {
      case Algorithm::InstaIss:
        rec.tmpl = te_insta_iss(sim.task, sim.serv, real, spec.weights).tmpl;
        break;
      case Algorithm::Ets:
        rec.tmpl = ets(sim.task, sim.serv, real, spec.weights, spec.ets_cap);
        break;
      case Algorithm::Tpts:
        rec.tmpl = tpts(sim.task, sim.serv, real, spec.weights);
        break;
      case Algorithm::Dpts:
        rec.tmpl = dpts(sim.task, sim.serv, real, spec.weights);
        break;
      case Algorithm::Rts:
        rec.tmpl = rts(sim.task, sim.serv, real, spec.weights, random_baseline, spec.rts_restarts);
        break;
      case Algorithm::Phts:
        break;
    }
    rec.rt_seconds = seconds_since(start);
    rec.source = rec.tmpl ? TemplateSource::Online : TemplateSource::Infeasible;
  }
  fill_metrics(rec, sim, real, spec.weights);
  return rec;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (n_sps == 0) throw InputError("scenario: n_sps must be >= 1");
  const std::size_t max_edges = n_sps * (n_sps - 1) / 2;
  if (n_edges > max_edges) throw InputError("scenario: n_edges exceeds n_sps*(n_sps-1)/2");
  if (n_edges + 1 < n_sps) throw InputError("scenario: n_edges must be >= n_sps - 1 for a connected VC");
  if (simulations == 0) throw InputError("scenario: simulations must be >= 1");
  if (events_per_simulation == 0) throw InputError("scenario: events_per_simulation must be >= 1");
  if (!model_file.empty() && service_file.empty()) throw InputError("scenario: a model file needs a service file");
  if (const int* type = std::get_if<int>(&task); type && (*type < 1 || *type > 3)) {
    throw InputError("scenario: built-in task type must be 1, 2 or 3");
  }
  risk.validate();
  weights.validate();
  for (const auto& [r, name] : {std::pair{stats.t_conn_mean, "t_conn_mean"}, {stats.t_conn_bounds, "t_conn_bounds"},
                                {stats.c_mean, "c_mean"}, {stats.c_variance, "c_variance"},
                                {stats.c_bounds, "c_bounds"}, {stats.r_mean, "r_mean"},
                                {stats.r_variance, "r_variance"}, {stats.r_bounds, "r_bounds"},
                                {stats.f_mean, "f_mean"}, {stats.f_variance, "f_variance"},
                                {stats.f_bounds, "f_bounds"}}) {
    require_range(r, name);
  }
}

ServiceGraph generate_service_graph(std::size_t n_sps, std::size_t n_edges, SeededRng& rng) {
  if (n_sps == 0) throw InputError("generate_service_graph: n_sps must be >= 1");
  if (n_edges > n_sps * (n_sps - 1) / 2) throw InputError("generate_service_graph: too many edges");
  if (n_edges + 1 < n_sps) throw InputError("generate_service_graph: too few edges for connectivity");

  // Random spanning tree: shuffle the nodes, attach each to an earlier one.
  std::vector<NodeId> perm(n_sps);
  for (NodeId i = 0; i < n_sps; ++i) perm[i] = i;
  for (std::size_t i = n_sps; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  std::vector<NodePair> edges;
  std::vector<char> taken(n_sps * n_sps, 0);
  for (std::size_t i = 1; i < n_sps; ++i) {
    const NodePair e = NodePair::of(perm[i], perm[rng.uniform_index(i)]);
    edges.push_back(e);
    taken[e.first * n_sps + e.second] = 1;
  }
  std::vector<NodePair> rest;
  for (NodeId a = 0; a < n_sps; ++a) {
    for (NodeId b = a + 1; b < n_sps; ++b) {
      if (!taken[a * n_sps + b]) rest.push_back({a, b});
    }
  }
  const std::size_t extra = n_edges - edges.size();
  for (std::size_t i = 0; i < extra; ++i) {
    std::swap(rest[i], rest[i + rng.uniform_index(rest.size() - i)]);
    edges.push_back(rest[i]);
  }
  std::sort(edges.begin(), edges.end());
  return ServiceGraph(n_sps, edges);
}

StatModel generate_stat_model(const ServiceGraph& serv, const StatParams& p, SeededRng& rng) {
  std::vector<DistributionSpec> f, r, t_conn, c_exch;
  for (NodeId m = 0; m < serv.size(); ++m) {
    const double f_mean = draw(p.f_mean, rng);
    const double f_var = draw(p.f_variance, rng);
    f.push_back(DistributionSpec::truncated_gaussian(f_mean, f_var, p.f_bounds.lo, p.f_bounds.hi));
    const double r_mean = draw(p.r_mean, rng);
    const double r_var = draw(p.r_variance, rng);
    r.push_back(DistributionSpec::truncated_gaussian(r_mean, r_var, p.r_bounds.lo, p.r_bounds.hi));
  }
  for (EdgeId e = 0; e < serv.topology().edge_count(); ++e) {
    const double t_mean = draw(p.t_conn_mean, rng);
    t_conn.push_back(DistributionSpec::truncated_exponential(t_mean, p.t_conn_bounds.lo, p.t_conn_bounds.hi));
    const double c_mean = draw(p.c_mean, rng);
    const double c_var = draw(p.c_variance, rng);
    c_exch.push_back(DistributionSpec::truncated_gaussian(c_mean, c_var, p.c_bounds.lo, p.c_bounds.hi));
  }
  return StatModel(serv, std::move(f), std::move(r), std::move(t_conn), std::move(c_exch));
}

TaskGraph builtin_task_graph(int type_id) {
  // Per-component attributes cycle through fixed values inside the usual
  // ranges: q in [0.1, 0.2] Gcycles, d in [200, 400] kbit, t_max in [0.5, 2] s.
  static constexpr double kQ[] = {0.12e9, 0.18e9, 0.15e9, 0.10e9, 0.20e9, 0.16e9, 0.13e9};
  static constexpr double kD[] = {250e3, 300e3, 350e3, 200e3, 400e3, 280e3, 320e3};
  static constexpr double kTmax[] = {0.5, 1.0, 0.8, 1.5, 2.0, 0.6, 1.2};
  static constexpr double kW[] = {0.3, 0.2, 0.4, 0.25, 0.35};

  std::vector<std::pair<NodeId, NodeId>> shape;
  std::size_t size = 0;
  switch (type_id) {
    case 1:  // bowtie: triangles {0,1,3} and {1,2,4} sharing hub 1
      size = 5;
      shape = {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {1, 4}, {2, 4}};
      break;
    case 2:  // two triangles on a 4-cycle
      size = 6;
      shape = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 5}};
      break;
    case 3:  // strip of triangles
      size = 7;
      shape = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 5}, {4, 5}, {4, 6}, {5, 6}};
      break;
    default:
      throw InputError("unknown built-in task type " + std::to_string(type_id) + " (expected 1, 2 or 3)");
  }
  std::vector<TaskComponent> comps;
  for (std::size_t n = 0; n < size; ++n) comps.push_back({kTmax[n], kQ[n], kD[n]});
  std::vector<TaskEdge> edges;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    edges.push_back({shape[i].first, shape[i].second, kW[i % std::size(kW)]});
  }
  return TaskGraph(std::move(comps), edges);
}

Realization realize_scenario(const StatModel& model, SeededRng& rng) {
  Realization real;
  for (std::size_t m = 0; m < model.provider_count(); ++m) {
    real.f.push_back(sample(model.f()[m], rng));
    real.r.push_back(sample(model.r()[m], rng));
  }
  for (std::size_t e = 0; e < model.edge_count(); ++e) {
    real.t_conn.push_back(sample(model.t_conn()[e], rng));
    real.c_exch.push_back(sample(model.c_exch()[e], rng));
  }
  return real;
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Phts:
      return "phts";
    case Algorithm::InstaIss:
      return "instaiss";
    case Algorithm::Ets:
      return "ets";
    case Algorithm::Tpts:
      return "tpts";
    case Algorithm::Dpts:
      return "dpts";
    case Algorithm::Rts:
      return "rts";
  }
  return "phts";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::Phts, Algorithm::InstaIss, Algorithm::Ets, Algorithm::Tpts, Algorithm::Dpts,
                 Algorithm::Rts}) {
    if (algorithm_name(a) == name) return a;
  }
  throw InputError("unknown algorithm '" + std::string(name) + "' (expected ets|tpts|dpts|rts|instaiss|phts)");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Algorithm a = parse_algorithm(item);
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    start = comma + 1;
  }
  if (out.empty()) throw InputError("algorithm list is empty");
  return out;
}

const AlgorithmSummary* RunSummary::find(Algorithm a) const {
  for (const auto& s : algorithms) {
    if (s.algo == a) return &s;
  }
  return nullptr;
}

RunSummary summarize_metrics(std::vector<EventRecord> records) {
  std::sort(records.begin(), records.end(), [](const EventRecord& a, const EventRecord& b) {
    return std::tie(a.event, a.algo) < std::tie(b.event, b.algo);
  });
  RunSummary out;
  for (auto algo : {Algorithm::Phts, Algorithm::InstaIss, Algorithm::Ets, Algorithm::Tpts, Algorithm::Dpts,
                    Algorithm::Rts}) {
    AlgorithmSummary s;
    s.algo = algo;
    std::vector<double> rts;
    std::size_t reused = 0;
    for (const EventRecord& r : records) {
      if (r.algo != algo) continue;
      ++s.events;
      rts.push_back(r.rt_seconds);
      s.mean_rt += r.rt_seconds;
      if (r.source == TemplateSource::OfflineReused) ++reused;
      if (!r.tmpl || !r.cf) continue;
      ++s.successes;
      s.mean_cf += *r.cf;
      s.mean_tct += r.tct.value_or(0.0);
      s.mean_dec += r.dec.value_or(0.0);
    }
    if (s.events == 0) continue;
    const auto events = static_cast<double>(s.events);
    s.mean_rt /= events;
    s.reuse_rate = static_cast<double>(reused) / events;
    s.failure_rate = static_cast<double>(s.events - s.successes) / events;
    if (s.successes > 0) {
      const auto ok = static_cast<double>(s.successes);
      s.mean_cf /= ok;
      s.mean_tct /= ok;
      s.mean_dec /= ok;
    }
    std::sort(rts.begin(), rts.end());
    const std::size_t mid = rts.size() / 2;
    s.median_rt = rts.size() % 2 ? rts[mid] : 0.5 * (rts[mid - 1] + rts[mid]);
    out.algorithms.push_back(s);
  }
  return out;
}

SimulationContext build_simulation(const ScenarioSpec& spec, std::size_t simulation) {
  spec.validate();
  SeededRng sim_rng = simulation_stream(spec, simulation);
  SimulationContext ctx;
  ctx.index = simulation;
  if (const int* type = std::get_if<int>(&spec.task)) {
    ctx.task = builtin_task_graph(*type);
  } else {
    ctx.task = load_task_graph(std::get<std::string>(spec.task));
  }
  SeededRng topo_rng = sim_rng.child(kTopologyStream);
  ctx.serv = spec.service_file.empty() ? generate_service_graph(spec.n_sps, spec.n_edges, topo_rng)
                                       : load_service_graph(spec.service_file);
  if (ctx.task.size() > ctx.serv.size()) throw InputError("scenario: task has more components than the VC has SPs");
  SeededRng stat_rng = sim_rng.child(kStatisticsStream);
  ctx.model = spec.model_file.empty() ? generate_stat_model(ctx.serv, spec.stats, stat_rng)
                                      : load_stat_model(spec.model_file, ctx.serv);
  const auto start = std::chrono::steady_clock::now();
  ctx.offline = ra_pilot_iss(ctx.task, ctx.serv, ctx.model, spec.risk, spec.weights);
  ctx.offline_seconds = seconds_since(start);
  return ctx;
}

Realization event_realization(const ScenarioSpec& spec, std::size_t simulation, std::size_t local_event,
                              const StatModel& model) {
  SeededRng rng = event_stream(spec, simulation, local_event).child(kRealizationStream);
  return realize_scenario(model, rng);
}

BenchResult run_monte_carlo(const ScenarioSpec& spec, const std::vector<Algorithm>& algorithms,
                            std::size_t events_per_simulation, std::size_t jobs) {
  spec.validate();
  if (events_per_simulation == 0) throw InputError("run_monte_carlo: at least one event is required");
  if (algorithms.empty()) throw InputError("run_monte_carlo: no algorithms selected");
  jobs = std::max<std::size_t>(1, jobs);

  BenchResult out;
  for (std::size_t s = 0; s < spec.simulations; ++s) {
    const SimulationContext sim = build_simulation(spec, s);
    out.offline_templates.push_back(sim.offline.tmpl);
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Ets) != algorithms.end()) {
      const std::size_t space = injective_assignment_count(sim.serv.size(), sim.task.size());
      if (space > spec.ets_cap) {
        throw EtsCapExceeded("ETS: " + std::to_string(space) + " injective assignments exceed the cap of " +
                             std::to_string(spec.ets_cap));
      }
    }

    std::vector<EventRecord> slots(events_per_simulation * algorithms.size());
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto run_events = [&] {
      for (std::size_t e = next++; e < events_per_simulation; e = next++) {
        const Realization real = event_realization(spec, s, e, sim.model);
        SeededRng random_baseline = event_stream(spec, s, e).child(kRandomBaselineStream);
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
          EventRecord rec = run_algorithm(algorithms[a], spec, sim, real, random_baseline);
          rec.simulation = s;
          rec.event = s * events_per_simulation + e;
          slots[e * algorithms.size() + a] = std::move(rec);
        }
      }
    };
    auto worker = [&] {
      try {
        run_events();
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = events_per_simulation;
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    out.records.insert(out.records.end(), std::make_move_iterator(slots.begin()), std::make_move_iterator(slots.end()));
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.event < b.event; });
  out.summary = summarize_metrics(out.records);
  return out;
}

}  // namespace vcsched
