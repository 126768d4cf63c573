// Acceptance run: one PASS/FAIL line per criterion. Exit status is 0 only when
// every criterion passes, except those named with --known-red, which still
// print FAIL but do not change the status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "vcsched/baselines.hpp"
#include "vcsched/cli.hpp"
#include "vcsched/io.hpp"
#include "vcsched/offline.hpp"
#include "vcsched/online.hpp"
#include "vcsched/simkit.hpp"

using namespace vcsched;
namespace fs = std::filesystem;

namespace {

const std::string kData = VCSCHED_DATA_DIR;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Small {
  TaskGraph task;
  ServiceGraph serv;
  StatModel model;
};

// Seeded small instance: 3..5 components, at most 12 SPs.
Small small_instance(std::uint64_t seed) {
  oracle::Rng rng(seed * 7919 + 1);
  const std::size_t k = 3 + seed % 3;
  TaskGraph task = oracle::random_task(k, rng);
  ServiceGraph serv = oracle::random_service(k + rng.index(13 - k), rng, 0.5);
  StatModel model = oracle::random_model(serv, rng);
  return {std::move(task), std::move(serv), std::move(model)};
}

constexpr std::uint64_t kSmallScenarios = 120;

Verdict online_optimality() {
  Verdict v;
  const CostWeights w{0.5, 0.5};
  std::size_t feasible = 0;
  for (std::uint64_t seed = 0; seed < kSmallScenarios; ++seed) {
    const Small in = small_instance(seed);
    oracle::Rng rng(seed + 1'000'003);
    const Realization real = oracle::draw_realization(in.model, rng);
    const OnlineResult insta = te_insta_iss(in.task, in.serv, real, w);
    const auto exh = ets(in.task, in.serv, real, w);
    v.require(insta.feasible() == exh.has_value(), "feasibility differs at seed " + std::to_string(seed));
    if (!insta.feasible() || !exh) continue;
    ++feasible;
    const double exh_cf = cost_function(in.task, in.serv, *exh, real, w);
    v.require(std::abs(insta.cost - exh_cf) <= 1e-12, "CF differs at seed " + std::to_string(seed));
    v.require(oracle::realized_valid(in.task, in.serv, *insta.tmpl, real),
              "invalid InstaISS template at seed " + std::to_string(seed));
    v.require(oracle::realized_valid(in.task, in.serv, *exh, real),
              "invalid ETS template at seed " + std::to_string(seed));
  }
  v.require(feasible >= 30, "too few feasible scenarios");
  if (v.pass) {
    v.detail = std::to_string(kSmallScenarios) + " scenarios, " + std::to_string(feasible) +
               " feasible, CF(TE-InstaISS) == CF(ETS), all templates valid";
  }
  return v;
}

Verdict offline_soundness() {
  Verdict v;
  const CostWeights w{0.5, 0.5};
  std::size_t feasible = 0, candidates = 0;
  for (std::uint64_t seed = 0; seed < kSmallScenarios; ++seed) {
    const Small in = small_instance(seed);
    const RiskConfig risk{0.3 + 0.2 * static_cast<double>(seed % 3), 0.3 + 0.15 * static_cast<double>(seed % 4)};
    const auto expected = oracle::brute_offline_feasible(in.task, in.serv, in.model, risk.xi, risk.xi_prime);
    const OfflineResult res = ra_pilot_iss(in.task, in.serv, in.model, risk, w);
    v.require(res.candidates == expected, "candidate set differs at seed " + std::to_string(seed));
    v.require(res.feasible() == !expected.empty(), "feasibility differs at seed " + std::to_string(seed));
    if (expected.empty() || !res.feasible()) continue;
    ++feasible;
    candidates += expected.size();
    const oracle::Moments mo(in.model);
    double best = INFINITY;
    for (const Template& t : expected) best = std::min(best, oracle::expected_cf(in.task, in.serv, t, mo, w));
    const double chosen = oracle::expected_cf(in.task, in.serv, *res.tmpl, mo, w);
    v.require(chosen <= best + 1e-12, "non-minimal template at seed " + std::to_string(seed));
    v.require(std::abs(res.expected_cost - expected_cost_function(in.task, in.serv, *res.tmpl, in.model, w)) <= 1e-12,
              "reported expected cost mismatch at seed " + std::to_string(seed));
  }
  v.require(feasible >= 20, "too few feasible scenarios");
  if (v.pass) {
    v.detail = std::to_string(feasible) + " feasible of " + std::to_string(kSmallScenarios) + ", " +
               std::to_string(candidates) + " candidates matched brute force, minimum expected CF selected";
  }
  return v;
}

// Latin hypercube estimate of P(q/f + d/r > t_max) from oracle quantiles.
double lhs_overtime(const DistributionSpec& f, const DistributionSpec& r, double q, double d, double t_max,
                    std::size_t n, oracle::Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
  std::size_t over = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double uf = (static_cast<double>(i) + rng.u01()) / static_cast<double>(n);
    const double ur = (static_cast<double>(perm[i]) + rng.u01()) / static_cast<double>(n);
    const double fv = oracle::quantile(f, std::min(uf, 1.0 - 1e-16));
    const double rv = oracle::quantile(r, std::min(ur, 1.0 - 1e-16));
    if (q / fv + d / rv > t_max) ++over;
  }
  return static_cast<double>(over) / static_cast<double>(n);
}

Verdict risk_cross_oracle() {
  Verdict v;
  oracle::Rng rng(2024);
  double worst_time = 0.0;
  for (int point = 0; point < 20; ++point) {
    const double fm = rng.uniform(2e9, 4e9), fv = rng.uniform(0.04e18, 0.07e18);
    const double rm = rng.uniform(5e6, 7e6);
    const double q = rng.uniform(0.1e9, 0.2e9), d = rng.uniform(200e3, 400e3);
    // Deadlines around the nominal completion time keep the risk away from 0 and 1.
    const double t_max = (q / fm + d / rm) * rng.uniform(0.9, 1.15);
    const auto f = DistributionSpec::truncated_gaussian(fm, fv, 1.5e9, 4.5e9);
    const auto r = DistributionSpec::truncated_gaussian(rm, 0.2e12, 4e6, 8e6);
    const double quad = risk_time(f, r, q, d, t_max);
    const double mc = lhs_overtime(f, r, q, d, t_max, 1'000'000, rng);
    worst_time = std::max(worst_time, std::abs(quad - mc));
  }
  v.require(worst_time <= 1e-3, "risk_time off by " + fmt("%.2e", worst_time));

  double worst_struct = 0.0;
  for (int point = 0; point < 20; ++point) {
    const double mean = rng.uniform(5.0, 15.0), w = rng.uniform(0.1, 20.0);
    const double closed = (1.0 - std::exp(-w / mean)) / (1.0 - std::exp(-60.0 / mean));
    worst_struct = std::max(worst_struct,
                            std::abs(risk_struct(DistributionSpec::truncated_exponential(mean, 0.0, 60.0), w) - closed));
  }
  const double anchor = risk_struct(DistributionSpec::truncated_exponential(5.0, 0.0, 60.0), 5.0);
  worst_struct = std::max(worst_struct, std::abs(anchor - (1.0 - std::exp(-1.0)) / (1.0 - std::exp(-12.0))));
  v.require(worst_struct <= 1e-9, "risk_struct off by " + fmt("%.2e", worst_struct));
  v.require(std::abs(anchor - 0.63212) < 1e-4, "risk_struct(5 s, 5 s) = " + fmt("%.6f", anchor));
  if (v.pass) {
    v.detail = "risk_time max |quad - LHS(1e6)| = " + fmt("%.2e", worst_time) + " over 20 points; risk_struct max err " +
               fmt("%.1e", worst_struct) + ", (5 s, 5 s) -> " + fmt("%.5f", anchor);
  }
  return v;
}

Verdict completion_bound() {
  Verdict v;
  constexpr std::size_t n = 100'000;
  double tightest = INFINITY;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    oracle::Rng rng(seed + 77);
    const TaskGraph task = oracle::random_task(3 + seed % 5, rng);
    const ServiceGraph serv = oracle::random_service(task.size() + rng.index(5), rng, 0.5);
    const StatModel model = oracle::random_model(serv, rng);
    Template t;
    std::vector<NodeId> sps(serv.size());
    std::iota(sps.begin(), sps.end(), 0);
    for (std::size_t i = 0; i < task.size(); ++i) {
      std::swap(sps[i], sps[i + rng.index(sps.size() - i)]);
      t.assignment.push_back(sps[i]);
    }
    const double bound = expected_task_completion_time(task, t, model);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double worst = 0.0;
      for (NodeId c = 0; c < task.size(); ++c) {
        const NodeId m = t.assignment[c];
        worst = std::max(worst, oracle::t_sum(task.component(c), oracle::sample(model.f()[m], rng),
                                              oracle::sample(model.r()[m], rng)));
      }
      sum += worst;
      sum2 += worst * worst;
    }
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / (n - 1));
    v.require(bound <= mean + 3.0 * se, "bound exceeds E[max] at seed " + std::to_string(seed));
    tightest = std::min(tightest, (mean + 3.0 * se - bound) / se);

    const StatModel det = oracle::random_model(serv, rng, true);
    double exact = 0.0;
    for (NodeId c = 0; c < task.size(); ++c) {
      const NodeId m = t.assignment[c];
      exact = std::max(exact, oracle::t_sum(task.component(c), det.f()[m].value(), det.r()[m].value()));
    }
    v.require(std::abs(expected_task_completion_time(task, t, det) - exact) <= 1e-12,
              "deterministic mismatch at seed " + std::to_string(seed));
  }
  if (v.pass) {
    v.detail = "50 pairs: max of expectations <= E[max] + 3 se (smallest margin " + fmt("%.1f", tightest) +
               " se); deterministic models exact";
  }
  return v;
}

Verdict paper_ordering() {
  Verdict v;
  const ScenarioSpec spec = load_scenario(kData + "/scenarios/type1_12sp.json");
  const std::vector<Algorithm> algos{Algorithm::Phts, Algorithm::InstaIss, Algorithm::Tpts, Algorithm::Dpts,
                                     Algorithm::Rts};
  const BenchResult res = run_monte_carlo(spec, algos, 100, 1);
  const AlgorithmSummary& phts = *res.summary.find(Algorithm::Phts);
  const AlgorithmSummary& insta = *res.summary.find(Algorithm::InstaIss);
  const double ratio = insta.median_rt / phts.median_rt;
  const double gap = phts.mean_cf / insta.mean_cf;

  std::string detail = "CF P-HTS " + fmt("%.4f", phts.mean_cf) + ", InstaISS " + fmt("%.4f", insta.mean_cf) +
                       " (ratio " + fmt("%.3f", gap) + ")";
  v.require(insta.mean_cf <= phts.mean_cf + 1e-12, "(a) InstaISS mean CF above P-HTS");
  v.require(gap <= 1.10, "(a) P-HTS mean CF " + fmt("%.1f", 100.0 * (gap - 1.0)) + "% above InstaISS, limit 10%");
  v.require(ratio >= 10.0, "(b) median RT ratio only " + fmt("%.1f", ratio));
  for (Algorithm a : {Algorithm::Tpts, Algorithm::Dpts, Algorithm::Rts}) {
    const AlgorithmSummary& s = *res.summary.find(a);
    detail += ", " + std::string(algorithm_name(a)) + " " + fmt("%.4f", s.mean_cf);
    v.require(s.successes > 0 && phts.mean_cf < s.mean_cf,
              "(c) P-HTS not below " + std::string(algorithm_name(a)));
  }
  v.require(phts.reuse_rate > 0.5, "(d) reuse rate " + fmt("%.2f", phts.reuse_rate));
  detail += "; median RT ratio " + fmt("%.0f", ratio) + "x; reuse " + fmt("%.2f", phts.reuse_rate);
  v.detail = v.pass ? detail : v.detail + "; " + detail;
  return v;
}

Verdict ets_guard() {
  Verdict v;
  const ScenarioSpec spec = load_scenario(kData + "/scenarios/type3_14sp.json");
  const SimulationContext ctx = build_simulation(spec, 0);
  const Realization real = event_realization(spec, 0, 0, ctx.model);

  std::vector<double> backup;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const OnlineResult r = te_insta_iss(ctx.task, ctx.serv, real, spec.weights);
    backup.push_back(seconds_since(t0));
    (void)r;
  }
  std::sort(backup.begin(), backup.end());
  const double backup_s = backup[backup.size() / 2];

  double ets_s = 0.0;
  bool capped = false;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = ets(ctx.task, ctx.serv, real, spec.weights, spec.ets_cap);
    ets_s = seconds_since(t0);
    const OnlineResult insta = te_insta_iss(ctx.task, ctx.serv, real, spec.weights);
    v.require(e.has_value() == insta.feasible(), "ETS and InstaISS disagree on feasibility");
  } catch (const EtsCapExceeded&) {
    capped = true;
  }
  const double ratio = ets_s / backup_s;
  v.require(capped || ratio >= 50.0, "ETS only " + fmt("%.1f", ratio) + "x slower than the backup path");

  ScenarioSpec tiny = spec;
  tiny.ets_cap = 1000;
  bool guarded = false;
  try {
    run_monte_carlo(tiny, {Algorithm::Ets}, 1);
  } catch (const EtsCapExceeded&) {
    guarded = true;
  }
  v.require(guarded, "tiny cap did not trigger the guard");
  if (v.pass) {
    v.detail = capped ? std::string("ETS refused by its cap")
                      : "ETS " + fmt("%.3f", ets_s) + " s vs backup " + fmt("%.2e", backup_s) + " s (" +
                            fmt("%.0f", ratio) + "x); tiny cap raises EtsCapExceeded";
  }
  return v;
}

std::vector<std::string> without_rt(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) rows.push_back(line.substr(0, line.rfind(',')));
  return rows;
}

Verdict reproducibility() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / ("vcsched_accept_" + std::to_string(::getpid()));
  std::vector<std::vector<std::string>> cols;
  std::vector<std::vector<std::optional<Template>>> templates;
  for (const char* run : {"a", "b"}) {
    const std::string dir = (root / run).string();
    const std::string scenario = kData + "/scenarios/type1_12sp.json";
    const char* argv[] = {"vcsched", "bench", "--scenario", scenario.c_str(), "--events", "30", "--algos",
                          "phts,instaiss,tpts,dpts,rts", "--jobs", "2", "--out", dir.c_str()};
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(std::size(argv)), argv, out, err);
    v.require(code == kExitOk, "bench exited with " + std::to_string(code) + ": " + err.str());
    if (code != kExitOk) break;
    cols.push_back(without_rt(read_text_file(dir + "/events.csv")));
    std::ifstream rec(dir + "/records.jsonl");
    std::vector<std::optional<Template>> t;
    for (const EventRecord& r : read_records_jsonl(rec)) t.push_back(r.tmpl);
    templates.push_back(std::move(t));
  }
  fs::remove_all(root);
  if (cols.size() == 2) {
    v.require(cols[0] == cols[1], "CF/TCT/DEC columns differ between runs");
    v.require(templates[0] == templates[1], "templates differ between runs");
    v.require(cols[0].size() == 1 + 30 * 5, "unexpected row count");
  }
  if (v.pass) v.detail = "two bench runs, 150 rows: CF/TCT/DEC columns byte-identical, templates identical";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> known_red;
  CLI::App app("Acceptance criteria 1-7");
  app.add_option("--known-red", known_red, "Criteria reported but not counted in the exit status");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "online optimality oracle", online_optimality},
      {2, "offline soundness and completeness", offline_soundness},
      {3, "risk integral cross-oracle", risk_cross_oracle},
      {4, "completion-time bound", completion_bound},
      {5, "ordering at desk scale", paper_ordering},
      {6, "ETS blow-up guard", ets_guard},
      {7, "reproducibility", reproducibility},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const bool excused = std::find(known_red.begin(), known_red.end(), c.id) != known_red.end();
    std::printf("criterion %d %s: %s%s (%s) [%.1f s]\n", c.id, c.name, v.pass ? "PASS" : "FAIL",
                !v.pass && excused ? " [known red]" : "", v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!v.pass && !excused) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
