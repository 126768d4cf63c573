#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vcsched/cost.hpp"
#include "vcsched/error.hpp"
#include "vcsched/graph.hpp"
#include "vcsched/simkit.hpp"

// JSON / JSON-lines / CSV persistence. Every document carries
// "schema_version"; this library reads and writes version 1.

namespace vcsched {

inline constexpr int kSchemaVersion = 1;

/// One problem found in an input document. `location` is "file:line:col"
/// for syntax errors and "file#/json/pointer" for schema or invariant errors.
struct Issue {
  std::string location;
  std::string message;
};

std::string to_string(const Issue& issue);

/// InputError carrying every issue found in a document.
class DocumentError : public InputError {
 public:
  explicit DocumentError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// Files are read whole; a missing file raises DocumentError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Parsers take the document text plus a name used in issue locations. They
// collect all issues before throwing DocumentError.
TaskGraph parse_task_graph(const std::string& text, const std::string& name = "<task>");
ServiceGraph parse_service_graph(const std::string& text, const std::string& name = "<service>");
StatModel parse_stat_model(const std::string& text, const ServiceGraph& serv, const std::string& name = "<model>");
ScenarioSpec parse_scenario(const std::string& text, const std::string& name = "<scenario>");
Template parse_template(const std::string& text, const std::string& name = "<template>");

TaskGraph load_task_graph(const std::string& path);
ServiceGraph load_service_graph(const std::string& path);
StatModel load_stat_model(const std::string& path, const ServiceGraph& serv);
ScenarioSpec load_scenario(const std::string& path);

std::string dump_task_graph(const TaskGraph& task);
std::string dump_service_graph(const ServiceGraph& serv);
std::string dump_stat_model(const StatModel& model, const ServiceGraph& serv);
std::string dump_scenario(const ScenarioSpec& spec);
std::string dump_template(const Template& t);

/// Checks a task / service / model trio and returns every issue found;
/// empty means clean. Never throws for bad content.
std::vector<Issue> validate_documents(const std::string& task_path, const std::string& service_path,
                                      const std::string& model_path);

/// One JSON object per line; an empty list gives an empty file.
void write_records_jsonl(std::ostream& out, const std::vector<EventRecord>& records);
std::vector<EventRecord> read_records_jsonl(std::istream& in, const std::string& name = "<records>");

std::string dump_summary(const RunSummary& summary);
RunSummary parse_summary(const std::string& text, const std::string& name = "<summary>");

/// Per-event CSV: event,algo,source,cf,tct,dec,rt. Infeasible events leave
/// cf/tct/dec empty.
void write_records_csv(std::ostream& out, const std::vector<EventRecord>& records);
/// Per-algorithm CSV: algo,events,successes,mean_cf,mean_tct,mean_dec,mean_rt,
/// median_rt,reuse_rate,failure_rate.
void write_summary_csv(std::ostream& out, const RunSummary& summary);

}  // namespace vcsched
