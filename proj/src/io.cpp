#include "vcsched/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace vcsched {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out;
  for (const Issue& i : issues) {
    if (!out.empty()) out += '\n';
    out += to_string(i);
  }
  return out;
}

std::string pointer(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string pointer(const std::string& base, std::size_t index) { return base + "/" + std::to_string(index); }

/// Collects schema issues against JSON-pointer locations inside one document.
class Checker {
 public:
  explicit Checker(std::string name) : name_(std::move(name)) {}

  void issue(const std::string& ptr, std::string message) {
    issues_.push_back({name_ + "#" + (ptr.empty() ? "/" : ptr), std::move(message)});
  }
  const std::vector<Issue>& issues() const { return issues_; }
  bool clean() const { return issues_.empty(); }
  void throw_if_dirty() const {
    if (!issues_.empty()) throw DocumentError(issues_);
  }

  bool object(const json& j, const std::string& ptr) {
    if (j.is_object()) return true;
    issue(ptr, "expected an object");
    return false;
  }

  const json* field(const json& obj, const std::string& ptr, const char* key, bool required = true) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issue(pointer(ptr, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  void only_keys(const json& obj, const std::string& ptr, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        issue(pointer(ptr, key), "unknown field");
      }
    }
  }

  std::optional<double> number(const json& obj, const std::string& ptr, const char* key, bool required = true) {
    const json* v = field(obj, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number() || !std::isfinite(v->get<double>())) {
      issue(pointer(ptr, key), "expected a finite number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::uint64_t> count(const json& obj, const std::string& ptr, const char* key,
                                     bool required = true) {
    const json* v = field(obj, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned()) {
      issue(pointer(ptr, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& ptr, const char* key,
                                    bool required = true) {
    const json* v = field(obj, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      issue(pointer(ptr, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  const json* array(const json& obj, const std::string& ptr, const char* key, bool required = true) {
    const json* v = field(obj, ptr, key, required);
    if (v && !v->is_array()) {
      issue(pointer(ptr, key), "expected an array");
      return nullptr;
    }
    return v;
  }

  void schema_version(const json& root) {
    const auto v = count(root, "", "schema_version");
    if (v && *v != static_cast<std::uint64_t>(kSchemaVersion)) {
      issue("/schema_version", "unsupported schema_version " + std::to_string(*v) + " (expected " +
                                   std::to_string(kSchemaVersion) + ")");
    }
  }

 private:
  std::string name_;
  std::vector<Issue> issues_;
};

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string syntax_message(const json::parse_error& e) {
  const std::string what = e.what();
  const std::size_t col = what.find("column ");
  const std::size_t colon = what.find(": ", col == std::string::npos ? 0 : col);
  return colon == std::string::npos ? what : what.substr(colon + 2);
}

/// Parses JSON text, turning syntax errors into a DocumentError located by
/// line and column.
json parse_json(const std::string& text, const std::string& name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    throw DocumentError({{name + ":" + std::to_string(line) + ":" + std::to_string(col), syntax_message(e)}});
  }
}

/// Dense ids: every entry's "id" must be distinct and the set must be 0..n-1.
/// Returns entry index -> id, or nullopt after recording issues.
std::optional<std::vector<NodeId>> dense_ids(Checker& chk, const json& list, const std::string& ptr) {
  std::vector<NodeId> ids(list.size());
  std::vector<std::optional<std::size_t>> seen(list.size());
  bool ok = true;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = pointer(ptr, i);
    if (!chk.object(list[i], at)) {
      ok = false;
      continue;
    }
    const auto id = chk.count(list[i], at, "id");
    if (!id) {
      ok = false;
      continue;
    }
    if (*id >= list.size()) {
      chk.issue(pointer(at, "id"), "id " + std::to_string(*id) + " out of range (ids must be 0.." +
                                       std::to_string(list.size() - 1) + ")");
      ok = false;
    } else if (seen[*id]) {
      chk.issue(pointer(at, "id"), "duplicate id " + std::to_string(*id));
      ok = false;
    } else {
      seen[*id] = i;
      ids[i] = *id;
    }
  }
  if (!ok) return std::nullopt;
  return ids;
}

/// Parses {"u","v"} of an edge entry against node count n; records issues
/// for bad ids, self-loops and duplicates (`seen` tracks earlier pairs).
std::optional<NodePair> edge_endpoints(Checker& chk, const json& e, const std::string& at, std::size_t index,
                                       std::size_t n, std::map<NodePair, std::size_t>& seen) {
  const auto u = chk.count(e, at, "u");
  const auto v = chk.count(e, at, "v");
  if (!u || !v) return std::nullopt;
  bool ok = true;
  for (const auto& [val, key] : {std::pair{*u, "u"}, std::pair{*v, "v"}}) {
    if (val >= n) {
      chk.issue(pointer(at, key), "unknown node id " + std::to_string(val));
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  if (*u == *v) {
    chk.issue(at, "self-loop on node " + std::to_string(*u));
    return std::nullopt;
  }
  const NodePair p = NodePair::of(*u, *v);
  if (const auto it = seen.find(p); it != seen.end()) {
    chk.issue(at, "duplicate edge (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                      ") already listed at index " + std::to_string(it->second));
    return std::nullopt;
  }
  seen.emplace(p, index);
  return p;
}

std::optional<DistributionSpec> parse_spec(Checker& chk, const json& obj, const std::string& ptr, const char* key) {
  const json* j = chk.field(obj, ptr, key);
  if (!j) return std::nullopt;
  const std::string at = pointer(ptr, key);
  if (!chk.object(*j, at)) return std::nullopt;
  chk.only_keys(*j, at, {"kind", "mean", "variance", "lower", "upper", "value"});
  const auto kind = chk.string(*j, at, "kind");
  if (!kind) return std::nullopt;
  try {
    if (*kind == "trunc_gauss") {
      const auto m = chk.number(*j, at, "mean"), v = chk.number(*j, at, "variance");
      const auto lo = chk.number(*j, at, "lower"), hi = chk.number(*j, at, "upper");
      if (!m || !v || !lo || !hi) return std::nullopt;
      return DistributionSpec::truncated_gaussian(*m, *v, *lo, *hi);
    }
    if (*kind == "trunc_exp") {
      const auto m = chk.number(*j, at, "mean");
      const auto lo = chk.number(*j, at, "lower"), hi = chk.number(*j, at, "upper");
      if (!m || !lo || !hi) return std::nullopt;
      return DistributionSpec::truncated_exponential(*m, *lo, *hi);
    }
    if (*kind == "deterministic") {
      const auto v = chk.number(*j, at, "value");
      if (!v) return std::nullopt;
      return DistributionSpec::deterministic(*v);
    }
    chk.issue(pointer(at, "kind"), "unknown kind '" + *kind + "' (expected trunc_gauss|trunc_exp|deterministic)");
  } catch (const InputError& e) {
    chk.issue(at, e.what());
  }
  return std::nullopt;
}

json spec_json(const DistributionSpec& s) {
  json j;
  j["kind"] = std::string(kind_name(s.kind()));
  switch (s.kind()) {
    case DistributionSpec::Kind::TruncatedGaussian:
      j["mean"] = s.parameter_mean();
      j["variance"] = s.variance();
      j["lower"] = s.lower();
      j["upper"] = s.upper();
      break;
    case DistributionSpec::Kind::TruncatedExponential:
      j["mean"] = s.parameter_mean();
      j["lower"] = s.lower();
      j["upper"] = s.upper();
      break;
    case DistributionSpec::Kind::Deterministic:
      j["value"] = s.value();
      break;
  }
  return j;
}

json template_json(const Template& t) { return t.assignment; }

std::optional<Template> template_from(Checker& chk, const json& j, const std::string& ptr) {
  if (!j.is_array()) {
    chk.issue(ptr, "expected an array of SP ids");
    return std::nullopt;
  }
  Template t;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned()) {
      chk.issue(pointer(ptr, i), "expected a non-negative integer");
      return std::nullopt;
    }
    t.assignment.push_back(j[i].get<NodeId>());
  }
  return t;
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

void read_range(Checker& chk, const json& obj, const std::string& ptr, const char* key, Range& out) {
  const json* j = chk.field(obj, ptr, key, false);
  if (!j) return;
  const std::string at = pointer(ptr, key);
  if (j->is_number()) {
    out = {j->get<double>(), j->get<double>()};
    return;
  }
  if (!j->is_array() || j->size() != 2 || !(*j)[0].is_number() || !(*j)[1].is_number()) {
    chk.issue(at, "expected a number or a [lo, hi] pair");
    return;
  }
  out = {(*j)[0].get<double>(), (*j)[1].get<double>()};
}

std::optional<double> optional_number(Checker& chk, const json& obj, const std::string& ptr, const char* key) {
  const json* v = chk.field(obj, ptr, key);
  if (!v || v->is_null()) return std::nullopt;
  if (!v->is_number()) {
    chk.issue(pointer(ptr, key), "expected a number or null");
    return std::nullopt;
  }
  return v->get<double>();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

}  // namespace

std::string to_string(const Issue& issue) { return issue.location + ": " + issue.message; }

DocumentError::DocumentError(std::vector<Issue> issues) : InputError(join_issues(issues)), issues_(std::move(issues)) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError({{path, "cannot open file for reading"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DocumentError({{path, "cannot open file for writing"}});
  out << text;
  if (!out) throw DocumentError({{path, "write failed"}});
}

TaskGraph parse_task_graph(const std::string& text, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "components", "edges"});
  const json* comps = chk.array(root, "", "components");
  const json* edges = chk.array(root, "", "edges");
  if (!comps || !edges) chk.throw_if_dirty();

  std::vector<TaskComponent> components(comps->size());
  const auto ids = dense_ids(chk, *comps, "/components");
  for (std::size_t i = 0; i < comps->size(); ++i) {
    const json& c = (*comps)[i];
    const std::string at = pointer("/components", i);
    if (!c.is_object()) continue;
    chk.only_keys(c, at, {"id", "t_max", "q", "d"});
    const auto t_max = chk.number(c, at, "t_max");
    const auto q = chk.number(c, at, "q");
    const auto d = chk.number(c, at, "d");
    if (t_max && !(*t_max > 0.0)) chk.issue(pointer(at, "t_max"), "t_max must be > 0");
    if (q && !(*q > 0.0)) chk.issue(pointer(at, "q"), "q must be > 0");
    if (d && !(*d >= 0.0)) chk.issue(pointer(at, "d"), "d must be >= 0");
    if (ids && t_max && q && d) components[(*ids)[i]] = {*t_max, *q, *d};
  }
  if (comps->empty()) chk.issue("/components", "task graph has no components");

  std::vector<TaskEdge> task_edges;
  std::map<NodePair, std::size_t> seen;
  for (std::size_t i = 0; i < edges->size(); ++i) {
    const json& e = (*edges)[i];
    const std::string at = pointer("/edges", i);
    if (!chk.object(e, at)) continue;
    chk.only_keys(e, at, {"u", "v", "w_task"});
    const auto w = chk.number(e, at, "w_task");
    if (w && !(*w > 0.0)) chk.issue(pointer(at, "w_task"), "w_task must be > 0");
    const auto p = edge_endpoints(chk, e, at, i, comps->size(), seen);
    if (p && w) task_edges.push_back({e["u"].get<NodeId>(), e["v"].get<NodeId>(), *w});
  }
  chk.throw_if_dirty();
  try {
    return TaskGraph(std::move(components), task_edges);
  } catch (const InputError& e) {
    chk.issue("", e.what());
  }
  chk.throw_if_dirty();
  return {};
}

ServiceGraph parse_service_graph(const std::string& text, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "providers", "edges"});
  const json* providers = chk.array(root, "", "providers");
  const json* edges = chk.array(root, "", "edges");
  if (!providers || !edges) chk.throw_if_dirty();
  dense_ids(chk, *providers, "/providers");
  for (std::size_t i = 0; i < providers->size(); ++i) {
    if ((*providers)[i].is_object()) chk.only_keys((*providers)[i], pointer("/providers", i), {"id"});
  }
  std::vector<NodePair> pairs;
  std::map<NodePair, std::size_t> seen;
  for (std::size_t i = 0; i < edges->size(); ++i) {
    const std::string at = pointer("/edges", i);
    if (!chk.object((*edges)[i], at)) continue;
    chk.only_keys((*edges)[i], at, {"u", "v"});
    if (const auto p = edge_endpoints(chk, (*edges)[i], at, i, providers->size(), seen)) pairs.push_back(*p);
  }
  chk.throw_if_dirty();
  return ServiceGraph(providers->size(), pairs);
}

StatModel parse_stat_model(const std::string& text, const ServiceGraph& serv, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "providers", "edges"});
  const json* providers = chk.array(root, "", "providers");
  const json* edges = chk.array(root, "", "edges");
  if (!providers || !edges) chk.throw_if_dirty();

  if (providers->size() != serv.size()) {
    chk.issue("/providers", "model lists " + std::to_string(providers->size()) + " providers, service graph has " +
                                std::to_string(serv.size()));
  }
  if (edges->size() != serv.topology().edge_count()) {
    chk.issue("/edges", "model lists " + std::to_string(edges->size()) + " edges, service graph has " +
                            std::to_string(serv.topology().edge_count()));
  }
  if (providers->size() != serv.size() || edges->size() != serv.topology().edge_count()) chk.throw_if_dirty();

  std::vector<std::optional<DistributionSpec>> f(serv.size()), r(serv.size());
  const auto ids = dense_ids(chk, *providers, "/providers");
  for (std::size_t i = 0; i < providers->size(); ++i) {
    const json& p = (*providers)[i];
    const std::string at = pointer("/providers", i);
    if (!p.is_object()) continue;
    chk.only_keys(p, at, {"id", "f", "r"});
    auto fs = parse_spec(chk, p, at, "f");
    auto rs = parse_spec(chk, p, at, "r");
    if (fs && !(fs->lower() > 0.0)) chk.issue(pointer(at, "f"), "f support must be strictly positive");
    if (rs && !(rs->lower() > 0.0)) chk.issue(pointer(at, "r"), "r support must be strictly positive");
    if (ids) {
      f[(*ids)[i]] = fs;
      r[(*ids)[i]] = rs;
    }
  }
  std::vector<std::optional<DistributionSpec>> t_conn(edges->size()), c_exch(edges->size());
  std::map<NodePair, std::size_t> seen;
  for (std::size_t i = 0; i < edges->size(); ++i) {
    const json& e = (*edges)[i];
    const std::string at = pointer("/edges", i);
    if (!chk.object(e, at)) continue;
    chk.only_keys(e, at, {"u", "v", "t_conn", "c_exch"});
    auto ts = parse_spec(chk, e, at, "t_conn");
    auto cs = parse_spec(chk, e, at, "c_exch");
    const auto p = edge_endpoints(chk, e, at, i, serv.size(), seen);
    if (!p) continue;
    const auto id = serv.topology().edge_id(p->first, p->second);
    if (!id) {
      chk.issue(at, "(" + std::to_string(p->first) + "," + std::to_string(p->second) + ") is not a service edge");
      continue;
    }
    t_conn[*id] = ts;
    c_exch[*id] = cs;
  }
  chk.throw_if_dirty();
  auto unwrap = [](std::vector<std::optional<DistributionSpec>>& v) {
    std::vector<DistributionSpec> out;
    for (auto& s : v) out.push_back(*s);
    return out;
  };
  return StatModel(serv, unwrap(f), unwrap(r), unwrap(t_conn), unwrap(c_exch));
}

ScenarioSpec parse_scenario(const std::string& text, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "n_sps", "n_edges", "task", "service", "model", "stats", "risk",
                           "weights", "seed", "simulations", "events_per_simulation", "ets_cap", "rts_restarts"});
  ScenarioSpec spec;
  if (auto v = chk.count(root, "", "n_sps", false)) spec.n_sps = *v;
  if (auto v = chk.count(root, "", "n_edges", false)) spec.n_edges = *v;
  if (auto v = chk.count(root, "", "seed", false)) spec.seed = *v;
  if (auto v = chk.count(root, "", "simulations", false)) spec.simulations = *v;
  if (auto v = chk.count(root, "", "events_per_simulation", false)) spec.events_per_simulation = *v;
  if (auto v = chk.count(root, "", "ets_cap", false)) spec.ets_cap = *v;
  if (auto v = chk.count(root, "", "rts_restarts", false)) spec.rts_restarts = *v;
  if (const json* task = chk.field(root, "", "task", false)) {
    if (task->is_number_integer()) {
      spec.task = task->get<int>();
    } else if (task->is_string()) {
      spec.task = task->get<std::string>();
    } else {
      chk.issue("/task", "expected a built-in type id or a task file path");
    }
  }
  if (auto v = chk.string(root, "", "service", false)) spec.service_file = *v;
  if (auto v = chk.string(root, "", "model", false)) spec.model_file = *v;
  if (const json* risk = chk.field(root, "", "risk", false); risk && chk.object(*risk, "/risk")) {
    chk.only_keys(*risk, "/risk", {"xi", "xi_prime"});
    if (auto v = chk.number(*risk, "/risk", "xi", false)) spec.risk.xi = *v;
    if (auto v = chk.number(*risk, "/risk", "xi_prime", false)) spec.risk.xi_prime = *v;
  }
  if (const json* w = chk.field(root, "", "weights", false); w && chk.object(*w, "/weights")) {
    chk.only_keys(*w, "/weights", {"lambda_t", "lambda_c"});
    if (auto v = chk.number(*w, "/weights", "lambda_t", false)) spec.weights.lambda_t = *v;
    if (auto v = chk.number(*w, "/weights", "lambda_c", false)) spec.weights.lambda_c = *v;
  }
  if (const json* s = chk.field(root, "", "stats", false); s && chk.object(*s, "/stats")) {
    chk.only_keys(*s, "/stats", {"t_conn_mean", "t_conn_bounds", "c_mean", "c_variance", "c_bounds", "r_mean",
                                 "r_variance", "r_bounds", "f_mean", "f_variance", "f_bounds"});
    StatParams& p = spec.stats;
    read_range(chk, *s, "/stats", "t_conn_mean", p.t_conn_mean);
    read_range(chk, *s, "/stats", "t_conn_bounds", p.t_conn_bounds);
    read_range(chk, *s, "/stats", "c_mean", p.c_mean);
    read_range(chk, *s, "/stats", "c_variance", p.c_variance);
    read_range(chk, *s, "/stats", "c_bounds", p.c_bounds);
    read_range(chk, *s, "/stats", "r_mean", p.r_mean);
    read_range(chk, *s, "/stats", "r_variance", p.r_variance);
    read_range(chk, *s, "/stats", "r_bounds", p.r_bounds);
    read_range(chk, *s, "/stats", "f_mean", p.f_mean);
    read_range(chk, *s, "/stats", "f_variance", p.f_variance);
    read_range(chk, *s, "/stats", "f_bounds", p.f_bounds);
  }
  chk.throw_if_dirty();
  try {
    spec.validate();
  } catch (const InputError& e) {
    chk.issue("", e.what());
  }
  chk.throw_if_dirty();
  return spec;
}

Template parse_template(const std::string& text, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "template"});
  const json* t = chk.field(root, "", "template");
  std::optional<Template> out;
  if (t) out = template_from(chk, *t, "/template");
  chk.throw_if_dirty();
  return *out;
}

TaskGraph load_task_graph(const std::string& path) { return parse_task_graph(read_text_file(path), path); }
ServiceGraph load_service_graph(const std::string& path) { return parse_service_graph(read_text_file(path), path); }
StatModel load_stat_model(const std::string& path, const ServiceGraph& serv) {
  return parse_stat_model(read_text_file(path), serv, path);
}

ScenarioSpec load_scenario(const std::string& path) {
  ScenarioSpec spec = parse_scenario(read_text_file(path), path);
  // File references are relative to the scenario file.
  auto resolve = [&](std::string& file) {
    const std::filesystem::path p(file);
    if (!file.empty() && p.is_relative()) {
      file = (std::filesystem::path(path).parent_path() / p).lexically_normal().string();
    }
  };
  if (auto* task = std::get_if<std::string>(&spec.task)) resolve(*task);
  resolve(spec.service_file);
  resolve(spec.model_file);
  return spec;
}

std::string dump_task_graph(const TaskGraph& task) {
  json comps = json::array();
  for (NodeId n = 0; n < task.size(); ++n) {
    const TaskComponent& c = task.component(n);
    comps.push_back({{"id", n}, {"t_max", c.t_max}, {"q", c.q}, {"d", c.d}});
  }
  json edges = json::array();
  for (EdgeId e = 0; e < task.topology().edge_count(); ++e) {
    const NodePair& p = task.topology().edge(e);
    edges.push_back({{"u", p.first}, {"v", p.second}, {"w_task", task.w_task(e)}});
  }
  return json{{"schema_version", kSchemaVersion}, {"components", comps}, {"edges", edges}}.dump(2) + "\n";
}

std::string dump_service_graph(const ServiceGraph& serv) {
  json providers = json::array();
  for (NodeId m = 0; m < serv.size(); ++m) providers.push_back({{"id", m}});
  json edges = json::array();
  for (const NodePair& p : serv.topology().edges()) edges.push_back({{"u", p.first}, {"v", p.second}});
  return json{{"schema_version", kSchemaVersion}, {"providers", providers}, {"edges", edges}}.dump(2) + "\n";
}

std::string dump_stat_model(const StatModel& model, const ServiceGraph& serv) {
  json providers = json::array();
  for (NodeId m = 0; m < model.provider_count(); ++m) {
    providers.push_back({{"id", m}, {"f", spec_json(model.f()[m])}, {"r", spec_json(model.r()[m])}});
  }
  json edges = json::array();
  for (EdgeId e = 0; e < model.edge_count(); ++e) {
    const NodePair& p = serv.topology().edge(e);
    edges.push_back({{"u", p.first},
                     {"v", p.second},
                     {"t_conn", spec_json(model.t_conn()[e])},
                     {"c_exch", spec_json(model.c_exch()[e])}});
  }
  return json{{"schema_version", kSchemaVersion}, {"providers", providers}, {"edges", edges}}.dump(2) + "\n";
}

std::string dump_scenario(const ScenarioSpec& spec) {
  const StatParams& p = spec.stats;
  json task;
  if (const int* type = std::get_if<int>(&spec.task)) {
    task = *type;
  } else {
    task = std::get<std::string>(spec.task);
  }
  json j{{"schema_version", kSchemaVersion},
         {"n_sps", spec.n_sps},
         {"n_edges", spec.n_edges},
         {"task", task},
         {"seed", spec.seed},
         {"simulations", spec.simulations},
         {"events_per_simulation", spec.events_per_simulation},
         {"ets_cap", spec.ets_cap},
         {"rts_restarts", spec.rts_restarts},
         {"risk", {{"xi", spec.risk.xi}, {"xi_prime", spec.risk.xi_prime}}},
         {"weights", {{"lambda_t", spec.weights.lambda_t}, {"lambda_c", spec.weights.lambda_c}}},
         {"stats",
          {{"t_conn_mean", range_json(p.t_conn_mean)},
           {"t_conn_bounds", range_json(p.t_conn_bounds)},
           {"c_mean", range_json(p.c_mean)},
           {"c_variance", range_json(p.c_variance)},
           {"c_bounds", range_json(p.c_bounds)},
           {"r_mean", range_json(p.r_mean)},
           {"r_variance", range_json(p.r_variance)},
           {"r_bounds", range_json(p.r_bounds)},
           {"f_mean", range_json(p.f_mean)},
           {"f_variance", range_json(p.f_variance)},
           {"f_bounds", range_json(p.f_bounds)}}}};
  if (!spec.service_file.empty()) j["service"] = spec.service_file;
  if (!spec.model_file.empty()) j["model"] = spec.model_file;
  return j.dump(2) + "\n";
}

std::string dump_template(const Template& t) {
  return json{{"schema_version", kSchemaVersion}, {"template", template_json(t)}}.dump(2) + "\n";
}

std::vector<Issue> validate_documents(const std::string& task_path, const std::string& service_path,
                                      const std::string& model_path) {
  std::vector<Issue> issues;
  auto absorb = [&](const std::string& path, auto&& load) {
    try {
      load();
    } catch (const DocumentError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    } catch (const InputError& e) {
      issues.push_back({path, e.what()});
    }
  };
  absorb(task_path, [&] { load_task_graph(task_path); });
  std::optional<ServiceGraph> serv;
  absorb(service_path, [&] { serv = load_service_graph(service_path); });
  if (serv) {
    absorb(model_path, [&] { load_stat_model(model_path, *serv); });
  } else {
    issues.push_back({model_path, "not checked: the service graph did not load"});
  }
  return issues;
}

void write_records_jsonl(std::ostream& out, const std::vector<EventRecord>& records) {
  for (const EventRecord& r : records) {
    json j{{"schema_version", kSchemaVersion},
           {"simulation", r.simulation},
           {"event", r.event},
           {"algo", std::string(algorithm_name(r.algo))},
           {"source", std::string(source_name(r.source))},
           {"cf", r.cf ? json(*r.cf) : json(nullptr)},
           {"tct", r.tct ? json(*r.tct) : json(nullptr)},
           {"dec", r.dec ? json(*r.dec) : json(nullptr)},
           {"rt", r.rt_seconds},
           {"template", r.tmpl ? template_json(*r.tmpl) : json(nullptr)}};
    out << j.dump() << '\n';
  }
}

std::vector<EventRecord> read_records_jsonl(std::istream& in, const std::string& name) {
  std::vector<EventRecord> out;
  std::string line;
  std::vector<Issue> issues;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    json j;
    try {
      j = parse_json(line, where);
    } catch (const DocumentError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      continue;
    }
    Checker chk(where);
    if (!chk.object(j, "")) {
      issues.insert(issues.end(), chk.issues().begin(), chk.issues().end());
      continue;
    }
    chk.schema_version(j);
    chk.only_keys(j, "", {"schema_version", "simulation", "event", "algo", "source", "cf", "tct", "dec", "rt",
                          "template"});
    EventRecord r;
    if (auto v = chk.count(j, "", "simulation")) r.simulation = *v;
    if (auto v = chk.count(j, "", "event")) r.event = *v;
    try {
      if (auto v = chk.string(j, "", "algo")) r.algo = parse_algorithm(*v);
    } catch (const InputError& e) {
      chk.issue("/algo", e.what());
    }
    try {
      if (auto v = chk.string(j, "", "source")) r.source = parse_source(*v);
    } catch (const InputError& e) {
      chk.issue("/source", e.what());
    }
    r.cf = optional_number(chk, j, "", "cf");
    r.tct = optional_number(chk, j, "", "tct");
    r.dec = optional_number(chk, j, "", "dec");
    if (auto v = chk.number(j, "", "rt")) r.rt_seconds = *v;
    if (const json* t = chk.field(j, "", "template"); t && !t->is_null()) r.tmpl = template_from(chk, *t, "/template");
    if (!chk.clean()) {
      issues.insert(issues.end(), chk.issues().begin(), chk.issues().end());
      continue;
    }
    out.push_back(std::move(r));
  }
  if (!issues.empty()) throw DocumentError(std::move(issues));
  return out;
}

std::string dump_summary(const RunSummary& summary) {
  json algos = json::array();
  for (const AlgorithmSummary& s : summary.algorithms) {
    algos.push_back({{"algo", std::string(algorithm_name(s.algo))},
                     {"events", s.events},
                     {"successes", s.successes},
                     {"mean_cf", s.mean_cf},
                     {"mean_tct", s.mean_tct},
                     {"mean_dec", s.mean_dec},
                     {"mean_rt", s.mean_rt},
                     {"median_rt", s.median_rt},
                     {"reuse_rate", s.reuse_rate},
                     {"failure_rate", s.failure_rate}});
  }
  return json{{"schema_version", kSchemaVersion}, {"algorithms", algos}}.dump(2) + "\n";
}

RunSummary parse_summary(const std::string& text, const std::string& name) {
  const json root = parse_json(text, name);
  Checker chk(name);
  if (!chk.object(root, "")) chk.throw_if_dirty();
  chk.schema_version(root);
  chk.only_keys(root, "", {"schema_version", "algorithms"});
  const json* algos = chk.array(root, "", "algorithms");
  if (!algos) chk.throw_if_dirty();
  RunSummary out;
  for (std::size_t i = 0; i < algos->size(); ++i) {
    const json& a = (*algos)[i];
    const std::string at = pointer("/algorithms", i);
    if (!chk.object(a, at)) continue;
    AlgorithmSummary s;
    try {
      if (auto v = chk.string(a, at, "algo")) s.algo = parse_algorithm(*v);
    } catch (const InputError& e) {
      chk.issue(pointer(at, "algo"), e.what());
    }
    if (auto v = chk.count(a, at, "events")) s.events = *v;
    if (auto v = chk.count(a, at, "successes")) s.successes = *v;
    if (auto v = chk.number(a, at, "mean_cf")) s.mean_cf = *v;
    if (auto v = chk.number(a, at, "mean_tct")) s.mean_tct = *v;
    if (auto v = chk.number(a, at, "mean_dec")) s.mean_dec = *v;
    if (auto v = chk.number(a, at, "mean_rt")) s.mean_rt = *v;
    if (auto v = chk.number(a, at, "median_rt")) s.median_rt = *v;
    if (auto v = chk.number(a, at, "reuse_rate")) s.reuse_rate = *v;
    if (auto v = chk.number(a, at, "failure_rate")) s.failure_rate = *v;
    out.algorithms.push_back(s);
  }
  chk.throw_if_dirty();
  return out;
}

void write_records_csv(std::ostream& out, const std::vector<EventRecord>& records) {
  out << "event,algo,source,cf,tct,dec,rt\n";
  for (const EventRecord& r : records) {
    out << r.event << ',' << algorithm_name(r.algo) << ',' << source_name(r.source) << ',' << format_optional(r.cf)
        << ',' << format_optional(r.tct) << ',' << format_optional(r.dec) << ',' << format_double(r.rt_seconds)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const RunSummary& summary) {
  out << "algo,events,successes,mean_cf,mean_tct,mean_dec,mean_rt,median_rt,reuse_rate,failure_rate\n";
  for (const AlgorithmSummary& s : summary.algorithms) {
    out << algorithm_name(s.algo) << ',' << s.events << ',' << s.successes << ',' << format_double(s.mean_cf) << ','
        << format_double(s.mean_tct) << ',' << format_double(s.mean_dec) << ',' << format_double(s.mean_rt) << ','
        << format_double(s.median_rt) << ',' << format_double(s.reuse_rate) << ','
        << format_double(s.failure_rate) << '\n';
  }
}

}  // namespace vcsched
