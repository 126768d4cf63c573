#include "vcsched/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcsched/baselines.hpp"
#include "vcsched/io.hpp"
#include "vcsched/offline.hpp"
#include "vcsched/simkit.hpp"

namespace vcsched {

namespace {

using nlohmann::json;

struct RiskFlags {
  double xi = RiskConfig{}.xi;
  double xi_prime = RiskConfig{}.xi_prime;
  double lambda_t = CostWeights{}.lambda_t;
  double lambda_c = CostWeights{}.lambda_c;
  CLI::Option* xi_opt = nullptr;
  CLI::Option* xi_prime_opt = nullptr;
  CLI::Option* lambda_t_opt = nullptr;
  CLI::Option* lambda_c_opt = nullptr;

  void attach(CLI::App& app) {
    xi_opt = app.add_option("--xi", xi, "Overtime risk budget, in (0, 1]")->capture_default_str();
    xi_prime_opt = app.add_option("--xi-prime", xi_prime, "Contact-failure risk budget, in (0, 1]")
                       ->capture_default_str();
    lambda_t_opt = app.add_option("--lambda-t", lambda_t, "Weight of task completion time")->capture_default_str();
    lambda_c_opt = app.add_option("--lambda-c", lambda_c, "Weight of data exchange cost")->capture_default_str();
  }
  /// Overrides only the values given on the command line or in --config.
  void apply(RiskConfig& risk, CostWeights& w) const {
    if (xi_opt->count()) risk.xi = xi;
    if (xi_prime_opt->count()) risk.xi_prime = xi_prime;
    if (lambda_t_opt->count()) w.lambda_t = lambda_t;
    if (lambda_c_opt->count()) w.lambda_c = lambda_c;
  }
};

struct ValidateArgs {
  std::string task, service, model, format = "text";
};

struct OfflineArgs {
  std::string task, service, model, format = "text", out;
  RiskFlags flags;
};

struct BenchArgs {
  std::string scenario, algos = "phts,instaiss,tpts,dpts,rts", task, out, format = "csv";
  std::size_t events = 0, simulations = 0, jobs = 1, ets_cap = 0, n_sps = 0, n_edges = 0;
  std::uint64_t seed = 0;
  int task_type = 0;
  RiskFlags flags;
  CLI::Option *events_opt = nullptr, *simulations_opt = nullptr, *seed_opt = nullptr, *ets_cap_opt = nullptr,
              *task_type_opt = nullptr, *task_opt = nullptr, *n_sps_opt = nullptr, *n_edges_opt = nullptr;
};

struct ReportArgs {
  std::string records, format = "csv", out;
  bool series = false;
};

struct GenerateArgs {
  std::string scenario, out;
  std::size_t simulation = 0;
};

/// Writes `text` to `path`, or to `out` when no path is given.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<Issue> issues = validate_documents(a.task, a.service, a.model);
  for (const Issue& i : issues) err << to_string(i) << '\n';
  if (a.format == "json") {
    json list = json::array();
    for (const Issue& i : issues) list.push_back({{"location", i.location}, {"message", i.message}});
    out << json{{"schema_version", kSchemaVersion}, {"ok", issues.empty()}, {"issues", list}}.dump(2) << '\n';
  }
  if (issues.empty()) {
    err << "ok: " << a.task << ", " << a.service << ", " << a.model << '\n';
    return kExitOk;
  }
  err << issues.size() << " issue(s) found\n";
  return kExitInputError;
}

int cmd_offline(const OfflineArgs& a, std::ostream& out, std::ostream& err) {
  const TaskGraph task = load_task_graph(a.task);
  const ServiceGraph serv = load_service_graph(a.service);
  const StatModel model = load_stat_model(a.model, serv);
  RiskConfig risk;
  CostWeights w;
  a.flags.apply(risk, w);
  risk.validate();
  w.validate();
  const OfflineResult res = ra_pilot_iss(task, serv, model, risk, w);

  json starved = json::array();
  for (NodeId n : res.pivot.starved) starved.push_back(n);
  std::string reason;
  if (!res.feasible()) {
    if (!res.pivot.starved.empty()) {
      reason = "components without any admissible SP:";
      for (NodeId n : res.pivot.starved) reason += " v" + std::to_string(n);
    } else {
      reason = "every component has admissible SPs, but no embedding meets the risk budgets on all task edges";
    }
  }

  if (a.format == "json") {
    json j{{"schema_version", kSchemaVersion},
           {"feasible", res.feasible()},
           {"template", res.tmpl ? json(res.tmpl->assignment) : json(nullptr)},
           {"expected_cf", res.tmpl ? json(res.expected_cost) : json(nullptr)},
           {"pivot", res.pivot.pivot},
           {"candidates", res.candidates.size()},
           {"starved", starved}};
    if (!res.feasible()) j["reason"] = reason;
    emit(j.dump(2) + "\n", a.out, out);
  } else if (res.tmpl) {
    emit("template " + to_string(*res.tmpl) + "\nexpected_cf " + format_number(res.expected_cost) + "\n", a.out, out);
  } else {
    emit("infeasible\n", a.out, out);
  }

  if (!res.feasible()) {
    err << "infeasible: " << reason << '\n';
    return kExitInfeasible;
  }
  err << "pivot v" << res.pivot.pivot << ", " << res.candidates.size() << " candidate template(s)\n";
  return kExitOk;
}

void print_summary_table(const RunSummary& summary, std::ostream& err) {
  char line[200];
  std::snprintf(line, sizeof line, "%-9s %7s %12s %12s %12s %12s %7s\n", "algo", "ok", "mean_cf", "mean_tct",
                "mean_dec", "median_rt", "reuse");
  err << line;
  for (const AlgorithmSummary& s : summary.algorithms) {
    std::snprintf(line, sizeof line, "%-9s %3zu/%-3zu %12.6g %12.6g %12.6g %12.3e %7.2f\n",
                  std::string(algorithm_name(s.algo)).c_str(), s.successes, s.events, s.mean_cf, s.mean_tct,
                  s.mean_dec, s.median_rt, s.reuse_rate);
    err << line;
  }
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec = a.scenario.empty() ? ScenarioSpec{} : load_scenario(a.scenario);
  if (a.events_opt->count()) spec.events_per_simulation = a.events;
  if (a.simulations_opt->count()) spec.simulations = a.simulations;
  if (a.seed_opt->count()) spec.seed = a.seed;
  if (a.ets_cap_opt->count()) spec.ets_cap = a.ets_cap;
  if (a.n_sps_opt->count()) spec.n_sps = a.n_sps;
  if (a.n_edges_opt->count()) spec.n_edges = a.n_edges;
  if (a.task_type_opt->count()) spec.task = a.task_type;
  if (a.task_opt->count()) spec.task = a.task;
  a.flags.apply(spec.risk, spec.weights);
  spec.validate();
  const std::vector<Algorithm> algos = parse_algorithm_list(a.algos);

  const BenchResult res = run_monte_carlo(spec, algos, spec.events_per_simulation, a.jobs);

  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    const std::filesystem::path dir(a.out);
    std::ostringstream records, events, summary_csv;
    write_records_jsonl(records, res.records);
    write_records_csv(events, res.records);
    write_summary_csv(summary_csv, res.summary);
    write_text_file((dir / "records.jsonl").string(), records.str());
    write_text_file((dir / "events.csv").string(), events.str());
    write_text_file((dir / "summary.json").string(), dump_summary(res.summary));
    write_text_file((dir / "summary.csv").string(), summary_csv.str());
    write_text_file((dir / "scenario.json").string(), dump_scenario(spec));
    err << "wrote records.jsonl, events.csv, summary.json, summary.csv, scenario.json to " << a.out << '\n';
  } else if (a.format == "jsonl") {
    write_records_jsonl(out, res.records);
  } else if (a.format == "json") {
    out << dump_summary(res.summary);
  } else {
    write_records_csv(out, res.records);
  }
  for (std::size_t s = 0; s < res.offline_templates.size(); ++s) {
    const auto& t = res.offline_templates[s];
    err << "simulation " << s << ": offline template " << (t ? to_string(*t) : std::string("infeasible")) << '\n';
  }
  print_summary_table(res.summary, err);
  return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.records);
  if (!in) throw DocumentError({{a.records, "cannot open file for reading"}});
  const std::vector<EventRecord> records = read_records_jsonl(in, a.records);
  const RunSummary summary = summarize_metrics(records);

  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    const std::filesystem::path dir(a.out);
    std::ostringstream summary_csv, series;
    write_summary_csv(summary_csv, summary);
    write_records_csv(series, records);
    write_text_file((dir / "summary.csv").string(), summary_csv.str());
    write_text_file((dir / "summary.json").string(), dump_summary(summary));
    write_text_file((dir / "series.csv").string(), series.str());
    err << "wrote summary.csv, summary.json, series.csv to " << a.out << '\n';
  } else if (a.series) {
    write_records_csv(out, records);
  } else if (a.format == "json") {
    out << dump_summary(summary);
  } else {
    write_summary_csv(out, summary);
  }
  err << records.size() << " record(s) from " << a.records << '\n';
  return kExitOk;
}

int cmd_generate(const GenerateArgs& a, std::ostream&, std::ostream& err) {
  const ScenarioSpec spec = a.scenario.empty() ? ScenarioSpec{} : load_scenario(a.scenario);
  const SimulationContext sim = build_simulation(spec, a.simulation);
  std::filesystem::create_directories(a.out);
  const std::filesystem::path dir(a.out);
  write_text_file((dir / "task.json").string(), dump_task_graph(sim.task));
  write_text_file((dir / "service.json").string(), dump_service_graph(sim.serv));
  write_text_file((dir / "model.json").string(), dump_stat_model(sim.model, sim.serv));
  err << "wrote task.json, service.json, model.json for simulation " << a.simulation << " to " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid offline/online graph-task scheduling for vehicular clouds", "vcsched"};
  app.set_config("--config", "", "TOML/INI file with option defaults; [section] per subcommand");
  app.require_subcommand(1);
  app.fallthrough(false);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a task / service / model trio for schema and invariant errors");
  validate->add_option("--task", va.task, "Task graph JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--service", va.service, "Service graph JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--model", va.model, "Statistical model JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--format", va.format, "text or json")->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  OfflineArgs oa;
  auto* offline = app.add_subcommand("offline", "Risk-aware offline pilot search; prints A_off and its expected CF");
  offline->add_option("--task", oa.task, "Task graph JSON")->required()->check(CLI::ExistingFile);
  offline->add_option("--service", oa.service, "Service graph JSON")->required()->check(CLI::ExistingFile);
  offline->add_option("--model", oa.model, "Statistical model JSON")->required()->check(CLI::ExistingFile);
  oa.flags.attach(*offline);
  offline->add_option("--format", oa.format, "text or json")->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  offline->add_option("--out", oa.out, "Write the result here instead of standard output");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Monte-Carlo benchmark on paired realizations");
  bench->add_option("--scenario", ba.scenario, "Scenario JSON (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  bench->add_option("--algos", ba.algos, "Comma-separated: phts,instaiss,ets,tpts,dpts,rts")->capture_default_str();
  ba.events_opt = bench->add_option("--events", ba.events, "Events per simulation")->check(CLI::PositiveNumber);
  ba.simulations_opt =
      bench->add_option("--simulations", ba.simulations, "Simulations (fresh VC each)")->check(CLI::PositiveNumber);
  ba.seed_opt = bench->add_option("--seed", ba.seed, "Root seed");
  ba.ets_cap_opt = bench->add_option("--ets-cap", ba.ets_cap, "Largest assignment space ETS may enumerate");
  ba.n_sps_opt = bench->add_option("--n-sps", ba.n_sps, "SPs in the generated VC");
  ba.n_edges_opt = bench->add_option("--n-edges", ba.n_edges, "Edges in the generated VC");
  ba.task_type_opt = bench->add_option("--task-type", ba.task_type, "Built-in task type")->check(CLI::Range(1, 3));
  ba.task_opt = bench->add_option("--task", ba.task, "Task graph JSON instead of a built-in type")
                    ->check(CLI::ExistingFile)
                    ->excludes(ba.task_type_opt);
  ba.flags.attach(*bench);
  bench->add_option("--jobs", ba.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--out", ba.out, "Directory for records.jsonl, events.csv, summary.json, summary.csv");
  bench->add_option("--format", ba.format, "Standard output without --out: csv (events), jsonl (records), json (summary)")
      ->check(CLI::IsMember({"csv", "jsonl", "json"}))
      ->capture_default_str();

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Plot-ready series and per-algorithm means from run records");
  report->add_option("--records", ra.records, "records.jsonl from bench")->required()->check(CLI::ExistingFile);
  report->add_flag("--series", ra.series, "Per-event CSV instead of the per-algorithm summary");
  report->add_option("--format", ra.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  report->add_option("--out", ra.out, "Directory for summary.csv, summary.json, series.csv");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Write the task, service and model files of one simulation");
  generate->add_option("--scenario", ga.scenario, "Scenario JSON")->check(CLI::ExistingFile);
  generate->add_option("--simulation", ga.simulation, "Simulation index")->capture_default_str();
  generate->add_option("--out", ga.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (*validate) return cmd_validate(va, out, err);
    if (*offline) return cmd_offline(oa, out, err);
    if (*bench) return cmd_bench(ba, out, err);
    if (*report) return cmd_report(ra, out, err);
    if (*generate) return cmd_generate(ga, out, err);
  } catch (const DocumentError& e) {
    for (const Issue& i : e.issues()) err << "error: " << to_string(i) << '\n';
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const EtsCapExceeded& e) {
    err << "error: " << e.what() << " (raise --ets-cap or drop ets)\n";
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitInternalError;
}

}  // namespace vcsched
