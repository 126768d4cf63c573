#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vcsched/baselines.hpp"
#include "vcsched/cost.hpp"
#include "vcsched/io.hpp"
#include "vcsched/offline.hpp"
#include "vcsched/online.hpp"
#include "vcsched/simkit.hpp"
#include "vcsched/stochastic.hpp"

namespace py = pybind11;
using namespace vcsched;

namespace {

std::vector<NodePair> to_pairs(const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<NodePair> out;
  for (const auto& [u, v] : edges) out.push_back({u, v});
  return out;
}

std::optional<std::vector<NodeId>> assignment(const std::optional<Template>& t) {
  if (!t) return std::nullopt;
  return t->assignment;
}

py::dict record_dict(const EventRecord& r) {
  py::dict d;
  d["simulation"] = r.simulation;
  d["event"] = r.event;
  d["algo"] = std::string(algorithm_name(r.algo));
  d["source"] = std::string(source_name(r.source));
  d["cf"] = r.cf;
  d["tct"] = r.tct;
  d["dec"] = r.dec;
  d["rt"] = r.rt_seconds;
  d["template"] = assignment(r.tmpl);
  return d;
}

py::dict summary_dict(const AlgorithmSummary& s) {
  py::dict d;
  d["events"] = s.events;
  d["successes"] = s.successes;
  d["mean_cf"] = s.mean_cf;
  d["mean_tct"] = s.mean_tct;
  d["mean_dec"] = s.mean_dec;
  d["mean_rt"] = s.mean_rt;
  d["median_rt"] = s.median_rt;
  d["reuse_rate"] = s.reuse_rate;
  d["failure_rate"] = s.failure_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vcsched, m) {
  m.doc() = "Hybrid offline/online graph-task scheduling over vehicular clouds";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<EtsCapExceeded>(m, "EtsCapExceeded", PyExc_RuntimeError);

  py::class_<TaskGraph>(m, "TaskGraph")
      .def(py::init([](const std::vector<std::tuple<double, double, double>>& comps,
                       const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
             std::vector<TaskComponent> c;
             for (const auto& [t_max, q, d] : comps) c.push_back({t_max, q, d});
             std::vector<TaskEdge> e;
             for (const auto& [u, v, w] : edges) e.push_back({u, v, w});
             return TaskGraph(std::move(c), e);
           }),
           py::arg("components"), py::arg("edges"),
           "components: [(t_max, q, d)], edges: [(u, v, w_task)]")
      .def_property_readonly("size", &TaskGraph::size)
      .def_property_readonly("edges", [](const TaskGraph& t) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (const NodePair& p : t.topology().edges()) out.emplace_back(p.first, p.second);
        return out;
      });

  py::class_<ServiceGraph>(m, "ServiceGraph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
             const auto pairs = to_pairs(edges);
             return ServiceGraph(n, pairs);
           }),
           py::arg("providers"), py::arg("edges"))
      .def_property_readonly("size", &ServiceGraph::size)
      .def_property_readonly("edges", [](const ServiceGraph& s) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (const NodePair& p : s.topology().edges()) out.emplace_back(p.first, p.second);
        return out;
      })
      .def("eccentricity", [](const ServiceGraph& s, NodeId v) { return s.topology().eccentricity(v); });

  py::class_<DistributionSpec>(m, "DistributionSpec")
      .def_static("truncated_gaussian", &DistributionSpec::truncated_gaussian, py::arg("mean"), py::arg("variance"),
                  py::arg("lower"), py::arg("upper"))
      .def_static("truncated_exponential", &DistributionSpec::truncated_exponential, py::arg("mean"),
                  py::arg("lower"), py::arg("upper"))
      .def_static("deterministic", &DistributionSpec::deterministic, py::arg("value"))
      .def_property_readonly("kind", [](const DistributionSpec& s) { return std::string(kind_name(s.kind())); })
      .def("mean", &DistributionSpec::mean)
      .def("cdf", &DistributionSpec::cdf)
      .def("quantile", &DistributionSpec::quantile);

  py::class_<StatModel>(m, "StatModel")
      .def(py::init<const ServiceGraph&, std::vector<DistributionSpec>, std::vector<DistributionSpec>,
                    std::vector<DistributionSpec>, std::vector<DistributionSpec>>(),
           py::arg("service"), py::arg("f"), py::arg("r"), py::arg("t_conn"), py::arg("c_exch"));

  py::class_<Realization>(m, "Realization")
      .def(py::init([](std::vector<double> f, std::vector<double> r, std::vector<double> t, std::vector<double> c) {
             return Realization{std::move(f), std::move(r), std::move(t), std::move(c)};
           }),
           py::arg("f"), py::arg("r"), py::arg("t_conn"), py::arg("c_exch"))
      .def_readonly("f", &Realization::f)
      .def_readonly("r", &Realization::r)
      .def_readonly("t_conn", &Realization::t_conn)
      .def_readonly("c_exch", &Realization::c_exch);

  py::class_<CostWeights>(m, "CostWeights")
      .def(py::init<double, double>(), py::arg("lambda_t") = 0.5, py::arg("lambda_c") = 0.5);
  py::class_<RiskConfig>(m, "RiskConfig")
      .def(py::init<double, double>(), py::arg("xi") = 0.05, py::arg("xi_prime") = 0.05);

  m.def("risk_time", &risk_time, py::arg("f"), py::arg("r"), py::arg("q"), py::arg("d"), py::arg("t_max"));
  m.def("risk_struct", &risk_struct, py::arg("t_conn"), py::arg("w_task"));
  m.def("expected_reciprocal", &expected_reciprocal);

  m.def(
      "cost_function",
      [](const TaskGraph& task, const ServiceGraph& serv, const std::vector<NodeId>& a, const Realization& real,
         const CostWeights& w) { return cost_function(task, serv, Template{a}, real, w); },
      py::arg("task"), py::arg("service"), py::arg("template"), py::arg("realization"),
      py::arg("weights") = CostWeights{});
  m.def(
      "expected_cost_function",
      [](const TaskGraph& task, const ServiceGraph& serv, const std::vector<NodeId>& a, const StatModel& model,
         const CostWeights& w) { return expected_cost_function(task, serv, Template{a}, model, w); },
      py::arg("task"), py::arg("service"), py::arg("template"), py::arg("model"),
      py::arg("weights") = CostWeights{});

  m.def(
      "ra_pilot_iss",
      [](const TaskGraph& task, const ServiceGraph& serv, const StatModel& model, const RiskConfig& risk,
         const CostWeights& w) {
        const OfflineResult r = ra_pilot_iss(task, serv, model, risk, w);
        py::dict d;
        d["template"] = assignment(r.tmpl);
        d["expected_cost"] = r.tmpl ? py::cast(r.expected_cost) : py::none();
        d["pivot"] = r.pivot.pivot;
        d["starved"] = r.pivot.starved;
        std::vector<std::vector<NodeId>> cands;
        for (const Template& t : r.candidates) cands.push_back(t.assignment);
        d["candidates"] = cands;
        return d;
      },
      py::arg("task"), py::arg("service"), py::arg("model"), py::arg("risk") = RiskConfig{},
      py::arg("weights") = CostWeights{});

  m.def(
      "te_insta_iss",
      [](const TaskGraph& task, const ServiceGraph& serv, const Realization& real, const CostWeights& w) {
        const OnlineResult r = te_insta_iss(task, serv, real, w);
        return py::make_tuple(assignment(r.tmpl), r.tmpl ? py::cast(r.cost) : py::none());
      },
      py::arg("task"), py::arg("service"), py::arg("realization"), py::arg("weights") = CostWeights{},
      "Returns (template or None, realized CF or None).");

  m.def(
      "hybrid_schedule",
      [](const TaskGraph& task, const ServiceGraph& serv, const std::optional<std::vector<NodeId>>& a_off,
         const Realization& real, const CostWeights& w) {
        std::optional<Template> t;
        if (a_off) t = Template{*a_off};
        const ScheduleOutcome o = hybrid_schedule(task, serv, t, real, w);
        py::dict d;
        d["template"] = assignment(o.tmpl);
        d["source"] = std::string(source_name(o.source));
        d["decision_time"] = o.decision_time;
        d["cf"] = o.cf;
        return d;
      },
      py::arg("task"), py::arg("service"), py::arg("a_off"), py::arg("realization"),
      py::arg("weights") = CostWeights{});

  m.def(
      "ets",
      [](const TaskGraph& task, const ServiceGraph& serv, const Realization& real, const CostWeights& w,
         std::size_t cap) { return assignment(ets(task, serv, real, w, cap)); },
      py::arg("task"), py::arg("service"), py::arg("realization"), py::arg("weights") = CostWeights{},
      py::arg("cap") = std::size_t{100'000'000});
  m.def(
      "tpts",
      [](const TaskGraph& task, const ServiceGraph& serv, const Realization& real, const CostWeights& w) {
        return assignment(tpts(task, serv, real, w));
      },
      py::arg("task"), py::arg("service"), py::arg("realization"), py::arg("weights") = CostWeights{});
  m.def(
      "dpts",
      [](const TaskGraph& task, const ServiceGraph& serv, const Realization& real, const CostWeights& w) {
        return assignment(dpts(task, serv, real, w));
      },
      py::arg("task"), py::arg("service"), py::arg("realization"), py::arg("weights") = CostWeights{});

  m.def("builtin_task_graph", &builtin_task_graph, py::arg("type_id"));
  m.def(
      "generate_service_graph",
      [](std::size_t n, std::size_t e, std::uint64_t seed) {
        SeededRng rng(seed);
        return generate_service_graph(n, e, rng);
      },
      py::arg("n_sps"), py::arg("n_edges"), py::arg("seed"));
  m.def(
      "realize",
      [](const StatModel& model, std::uint64_t seed) {
        SeededRng rng(seed);
        return realize_scenario(model, rng);
      },
      py::arg("model"), py::arg("seed"));

  m.def("load_task_graph", &load_task_graph, py::arg("path"));
  m.def("load_service_graph", &load_service_graph, py::arg("path"));
  m.def("load_stat_model", &load_stat_model, py::arg("path"), py::arg("service"));

  m.def(
      "run_monte_carlo",
      [](const std::string& scenario_path, const std::string& algos, std::optional<std::size_t> events,
         std::optional<std::uint64_t> seed, std::size_t jobs) {
        ScenarioSpec spec = scenario_path.empty() ? ScenarioSpec{} : load_scenario(scenario_path);
        if (seed) spec.seed = *seed;
        BenchResult res;
        {
          py::gil_scoped_release release;
          res = run_monte_carlo(spec, parse_algorithm_list(algos), events.value_or(spec.events_per_simulation), jobs);
        }
        py::list records;
        for (const EventRecord& r : res.records) records.append(record_dict(r));
        py::dict summary;
        for (const AlgorithmSummary& s : res.summary.algorithms) {
          summary[py::str(std::string(algorithm_name(s.algo)))] = summary_dict(s);
        }
        return py::make_tuple(records, summary);
      },
      py::arg("scenario") = "", py::arg("algorithms") = "phts,instaiss,tpts,dpts,rts", py::arg("events") = py::none(),
      py::arg("seed") = py::none(), py::arg("jobs") = 1,
      "Returns (records, summary) where summary maps algorithm name to its means.");
}
