#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vcsched/cost.hpp"
#include "vcsched/offline.hpp"
#include "vcsched/online.hpp"

namespace vcsched {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Intervals from which per-SP / per-edge distribution parameters are drawn
/// (uniformly) when a simulation is created. Base units throughout.
struct StatParams {
  Range t_conn_mean{5.0, 15.0};
  Range t_conn_bounds{0.0, 60.0};
  Range c_mean{0.03, 0.07};
  Range c_variance{0.001, 0.001};
  Range c_bounds{0.025, 0.075};
  Range r_mean{5e6, 7e6};
  Range r_variance{0.2e12, 0.2e12};
  Range r_bounds{4e6, 8e6};
  Range f_mean{2e9, 4e9};
  Range f_variance{0.04e18, 0.07e18};
  Range f_bounds{1.5e9, 4.5e9};
};

/// Built-in task type (1, 2, 3) or a path to a task JSON file.
using TaskRef = std::variant<int, std::string>;

struct ScenarioSpec {
  std::size_t n_sps = 12;
  std::size_t n_edges = 29;
  TaskRef task = 1;
  // Fixed instance files; empty means generate per simulation. A model file
  // requires a service file.
  std::string service_file;
  std::string model_file;
  StatParams stats;
  RiskConfig risk;
  CostWeights weights;
  std::uint64_t seed = 1;
  std::size_t simulations = 1;          // fresh topology + statistics each
  std::size_t events_per_simulation = 100;
  std::size_t ets_cap = 100'000'000;
  std::size_t rts_restarts = 100;

  /// Throws InputError on inconsistent counts or parameters.
  void validate() const;
};

/// Random connected simple graph with exactly n_edges edges: a random
/// spanning tree first, then extra edges drawn uniformly from the remaining
/// pairs.
ServiceGraph generate_service_graph(std::size_t n_sps, std::size_t n_edges, SeededRng& rng);

/// Draws and freezes every per-SP / per-edge distribution parameter.
StatModel generate_stat_model(const ServiceGraph& serv, const StatParams& params, SeededRng& rng);

/// Stand-in task topologies: type 1 has 5 components, type 2 has 6, type 3
/// has 7, with increasing edge density.
TaskGraph builtin_task_graph(int type_id);

/// One draw per quantity: f then r for every SP, then t_conn then c_exch for
/// every service edge, in id order.
Realization realize_scenario(const StatModel& model, SeededRng& rng);

enum class Algorithm { Phts, InstaIss, Ets, Tpts, Dpts, Rts };

std::string_view algorithm_name(Algorithm a);
/// Accepts "phts", "instaiss", "ets", "tpts", "dpts", "rts".
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithm_list(std::string_view comma_separated);

struct EventRecord {
  std::size_t simulation = 0;
  std::size_t event = 0;  // global index: simulation * events_per_simulation + local
  Algorithm algo = Algorithm::Phts;
  TemplateSource source = TemplateSource::Infeasible;
  std::optional<double> cf, tct, dec;
  double rt_seconds = 0.0;
  std::optional<Template> tmpl;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct AlgorithmSummary {
  Algorithm algo = Algorithm::Phts;
  std::size_t events = 0;
  std::size_t successes = 0;
  double mean_cf = 0.0;
  double mean_tct = 0.0;
  double mean_dec = 0.0;
  double mean_rt = 0.0;    // over all events, successful or not
  double median_rt = 0.0;
  double reuse_rate = 0.0;  // OfflineReused fraction of events
  double failure_rate = 0.0;

  friend bool operator==(const AlgorithmSummary&, const AlgorithmSummary&) = default;
};

struct RunSummary {
  std::vector<AlgorithmSummary> algorithms;  // in Algorithm enum order

  const AlgorithmSummary* find(Algorithm a) const;
  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Means over successful events only; RT statistics and rates over all.
RunSummary summarize_metrics(std::vector<EventRecord> records);

/// Everything fixed for one simulation: graphs, statistics and A^off.
struct SimulationContext {
  std::size_t index = 0;
  TaskGraph task;
  ServiceGraph serv;
  StatModel model;
  OfflineResult offline;
  double offline_seconds = 0.0;
};

SimulationContext build_simulation(const ScenarioSpec& spec, std::size_t simulation);

/// Realization of event `local_event` within a simulation. Every algorithm
/// of that event is handed this same realization.
Realization event_realization(const ScenarioSpec& spec, std::size_t simulation, std::size_t local_event,
                              const StatModel& model);

struct BenchResult {
  std::vector<EventRecord> records;  // sorted by (event, algorithm)
  RunSummary summary;
  std::vector<std::optional<Template>> offline_templates;  // one per simulation
};

/// Runs every algorithm on paired realizations. `events_per_simulation`
/// overrides the spec's count; `jobs` workers split the events. Throws
/// EtsCapExceeded before any event runs when ETS is selected on an instance
/// beyond its cap.
BenchResult run_monte_carlo(const ScenarioSpec& spec, const std::vector<Algorithm>& algorithms,
                            std::size_t events_per_simulation, std::size_t jobs = 1);

}  // namespace vcsched
