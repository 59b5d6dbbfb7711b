// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mnf/coordinator.hpp"
#include "mnf/criticality.hpp"
#include "mnf/experiments.hpp"
#include "mnf/io.hpp"
#include "mnf/metrics.hpp"
#include "mnf/scenario.hpp"
#include "support.hpp"

using namespace mnf;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char b[64];
  std::snprintf(b, sizeof(b), f, v);
  return b;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 5-20 agents, 3-10 obstacles in a 30 x 15 room.
Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GeneratorSpec spec;
  spec.n_agents = std::uniform_int_distribution<std::size_t>(5, 20)(rng);
  spec.n_obstacles = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
  spec.seed = seed;
  return generate(spec);
}

FieldContext agent_context(const Scenario &s, std::size_t i) {
  const CoalitionPartition part(s);
  const auto starts = s.start_positions();
  return make_field_context(s, starts, i, part, s.params);
}

// Enumeration with a different jitter stream than the solver's.
CpSearchOptions independent_search() {
  CpSearchOptions o;
  o.seed = 0x5eed1234;
  return o;
}

double worst_ratio(const CriticalSet &cs, double r) {
  double m = 0.0;
  for (Vec2 p : cs.non_target()) m = std::max(m, distance(p, cs.target) / r);
  return m;
}

std::vector<Vec2> sample_free(const FieldContext &ctx, const Workspace &ws, std::size_t n,
                              double margin, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> ux(0.0, ws.width), uy(0.0, ws.height);
  std::vector<Vec2> out;
  while (out.size() < n) {
    const Vec2 q{ux(rng), uy(rng)};
    if (psi_clearance(q, ctx) < margin || dnf_clearance(q, ctx) < margin) continue;
    if (distance(q, ctx.target) < margin) continue;
    out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict confinement_soundness() {
  std::size_t ok = 0;
  double worst = 0.0;
  std::string failures;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Scenario s = random_scenario(1000 + k);
    const std::size_t i = k % s.agents.size();
    const FieldContext ctx = agent_context(s, i);
    const double r = confinement_radius(s, i);
    const CriticalityReport rep = solve_alpha_dagger(ctx, s.workspace, r);
    const FieldContext jctx = confinement_context(ctx);
    bool good = true;
    for (int m = 0; m < 10; ++m) {
      const double alpha = rep.alpha_dagger * (1.0 + m);  // alpha-dagger .. 10 alpha-dagger
      const CriticalSet cs = find_critical_set(jctx.with_alpha(alpha), s.workspace, independent_search());
      worst = std::max(worst, worst_ratio(cs, r));
      good = good && is_confined(cs, r, 1e-6);
    }
    if (good) {
      ++ok;
    } else {
      failures += " seed" + std::to_string(1000 + k);
    }
  }
  return {ok == 20, std::to_string(ok) + "/20 scenarios confined at 10 alphas in [a+, 10a+], worst |cp-qt|/r " +
                        fmt("%.6f", worst) + failures};
}

Verdict gradient_correctness() {
  double worst_psi = 0.0, worst_omega = 0.0, worst_dnf = 0.0;
  std::size_t points = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(2000 + k);
    std::mt19937_64 rng(77 + k);
    const double h = 1e-6 * s.workspace.diagonal();
    const DnfParams dnf{};
    for (std::size_t n = 0; n < 1000; ++n) {
      const FieldContext ctx = agent_context(s, n % s.agents.size());
      const Vec2 q = sample_free(ctx, s.workspace, 1, 0.2, rng)[0];
      const Vec2 fp = testing::fd_gradient([&](Vec2 x) { return psi(x, ctx); }, q, h);
      const Vec2 fo =
          testing::fd_gradient([&](Vec2 x) { return omega(x, ctx.target, ctx.params.beta); }, q, h);
      const Vec2 fd = testing::fd_gradient([&](Vec2 x) { return dnf_baseline(x, ctx, dnf); }, q, h);
      worst_psi = std::max(worst_psi, testing::relative_error(grad_psi(q, ctx), fp));
      worst_omega = std::max(worst_omega,
                             testing::relative_error(grad_omega(q, ctx.target, ctx.params.beta).value, fo));
      worst_dnf = std::max(worst_dnf, testing::relative_error(grad_dnf_baseline(q, ctx, dnf), fd));
      ++points;
    }
  }
  const bool pass = worst_psi < 1e-5 && worst_omega < 1e-5 && worst_dnf < 1e-5;
  return {pass, std::to_string(points) + " points per field; worst relative error psi " + fmt("%.2e", worst_psi) +
                    ", omega " + fmt("%.2e", worst_omega) + ", dnf " + fmt("%.2e", worst_dnf)};
}

Verdict limit_property() {
  double worst = 0.0;
  std::size_t extra_cps = 0;
  std::mt19937_64 rng(31);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(3000 + k);
    const FieldContext ctx = confinement_context(agent_context(s, 0)).with_alpha(1e6);
    const double a = ctx.association();
    for (Vec2 q : sample_free(ctx, s.workspace, 4, 0.5, rng)) {
      const Vec2 limit = (2.0 * ctx.params.lambda1 + 2.0 * ctx.params.lambda3 * a) * (q - ctx.target);
      worst = std::max(worst, testing::relative_error(grad_psi(q, ctx), limit));
    }
    extra_cps += find_critical_set(ctx, s.workspace).non_target().size();
  }
  return {worst < 1e-3 && extra_cps == 0,
          "20 points, worst relative error " + fmt("%.2e", worst) + "; non-target CPs at alpha=1e6: " +
              std::to_string(extra_cps)};
}

struct TwoPhase {
  Scenario scenario;
  RunResult run;
};

TwoPhase two_phase_run() {
  GeneratorSpec spec;
  spec.n_agents = 6;
  spec.n_obstacles = 4;
  spec.width = 15.0;
  spec.height = 10.0;
  spec.seed = 4;
  TwoPhase out{generate(spec), {}};
  out.run = run(out.scenario, SimConfig{});
  return out;
}

Verdict two_phase_structure(const TwoPhase &tp) {
  const Scenario &s = tp.scenario;
  const double diag = s.workspace.diagonal();
  const double field_scale = s.params.lambda1 * diag * diag;
  double worst_offline = 0.0;
  double worst_final = 0.0;
  std::size_t kernel_agents = 0;
  std::vector<Vec2> finals;
  for (const auto &t : tp.run.trajectories) finals.push_back(t.samples.back().position);
  const CoalitionPartition part(s);
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const Vec2 qt = s.agents[i].target;
    std::optional<Vec2> entry;
    for (const Sample &smp : tp.run.trajectories[i].samples) {
      if (smp.phase != Phase::Kernel) continue;
      if (!entry) entry = smp.position;
      const Vec2 u = *entry - qt;
      const Vec2 w = smp.position - qt;
      const double off = norm(u) > 0.0 ? std::abs(u.x * w.y - u.y * w.x) / norm(u) : norm(w);
      worst_offline = std::max(worst_offline, off);
    }
    if (entry) ++kernel_agents;
    worst_final = std::max(worst_final, std::abs(tp.run.trajectories[i].samples.back().potential));
    const FieldContext ctx = make_field_context(s, finals, i, part, s.params);
    worst_final = std::max(worst_final, psi(finals[i], ctx));
  }
  const bool pass = tp.run.all_converged && kernel_agents == s.agents.size() &&
                    worst_offline <= 1e-9 * diag && worst_final < 1e-9 * field_scale;
  return {pass, std::string(tp.run.all_converged ? "all" : "not all") + " 6 agents converged in " +
                    std::to_string(tp.run.steps) + " steps; " + std::to_string(kernel_agents) +
                    " with a kernel phase; worst off-line " + fmt("%.2e", worst_offline) +
                    "; worst final potential " + fmt("%.2e", worst_final)};
}

std::vector<std::vector<SuiteColumn>> run_suites(const std::vector<SuiteEntry> &entries,
                                                 const std::vector<std::uint64_t> &seeds, bool keep) {
  std::vector<std::vector<SuiteColumn>> out;
  for (auto seed : seeds) {
    SuiteOptions opts;
    opts.seed = seed;
    opts.keep_runs = keep;
    out.push_back(run_suite(entries, opts));
  }
  return out;
}

Verdict kappa_trend(const std::vector<std::vector<SuiteColumn>> &seeds) {
  std::size_t below = 0, total = 0;
  std::vector<std::vector<double>> per_entry(4);
  std::string rows;
  for (const auto &cols : seeds) {
    rows += " [";
    for (std::size_t e = 0; e < cols.size(); ++e) {
      ++total;
      const auto &k = cols[e].kappa;
      if (k && *k < 1.0) ++below;
      per_entry[e].push_back(k ? *k : std::numeric_limits<double>::infinity());
      rows += (e ? " " : "") + (k ? fmt("%.3f", *k) : std::string("none"));
    }
    rows += "]";
  }
  std::vector<double> med;
  bool monotone = true;
  for (const auto &v : per_entry) {
    med.push_back(median(v));
    if (med.size() > 1 && med.back() > med[med.size() - 2]) monotone = false;
  }
  std::string meds;
  for (double m : med) meds += " " + fmt("%.3f", m);
  return {below >= 10 && monotone, std::to_string(below) + "/" + std::to_string(total) +
                                       " runs with kappa < 1; medians" + meds +
                                       (monotone ? " (non-increasing)" : " (not non-increasing)") +
                                       "; kappa per seed" + rows};
}

Verdict alpha_plausibility(const std::vector<std::vector<SuiteColumn>> &seeds) {
  std::size_t agents = 0, in_range = 0, confined = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto &cols : seeds) {
    for (const auto &col : cols) {
      if (!col.error.empty()) continue;
      const Scenario s = generate(col.spec, col.params);
      for (std::size_t i = 0; i < col.alpha_daggers.size(); ++i) {
        const double a = col.alpha_daggers[i];
        ++agents;
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        if (a >= 1.0 && a <= 50.0) ++in_range;
        const FieldContext ctx = confinement_context(agent_context(s, i)).with_alpha(a);
        const CriticalSet cs = find_critical_set(ctx, s.workspace, independent_search());
        if (is_confined(cs, confinement_radius(s, i), 1e-6)) ++confined;
      }
    }
  }
  std::string meds;
  for (const auto &col : seeds.front()) meds += " " + fmt("%.2f", col.alpha_dagger_median());
  return {agents > 0 && in_range == agents && confined == agents,
          std::to_string(in_range) + "/" + std::to_string(agents) + " agents with alpha-dagger in [1, 50] (range " +
              fmt("%.3f", lo) + ".." + fmt("%.2f", hi) + "); " + std::to_string(confined) + "/" +
              std::to_string(agents) + " confined on re-enumeration; first-seed medians" + meds};
}

Verdict fastest_at_dagger() {
  std::size_t ok = 0;
  std::string rows;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(7000 + k);
    const auto pts = sweep_alpha(s, {1.0, 2.0, 4.0}, SimConfig{});
    const bool good = pts[0].total_steps <= pts[1].total_steps && pts[0].total_steps <= pts[2].total_steps;
    if (good) ++ok;
    rows += " [" + std::to_string(pts[0].total_steps) + " " + std::to_string(pts[1].total_steps) + " " +
            std::to_string(pts[2].total_steps) + "]";
  }
  return {ok >= 4, std::to_string(ok) + "/5 scenarios fastest at alpha-dagger; total steps at 1/2/4x" + rows};
}

Verdict partial_associations(const std::vector<std::vector<SuiteColumn>> &seeds) {
  std::size_t holds = 0;
  bool complete = true;
  std::string rows;
  for (const auto &cols : seeds) {
    rows += " [";
    for (std::size_t e = 0; e < cols.size(); ++e) {
      complete = complete && cols[e].error.empty();
      rows += (e ? " " : "") + (cols[e].kappa ? fmt("%.3f", *cols[e].kappa) : std::string("none"));
    }
    rows += "]";
    if (cols.front().kappa && cols.back().kappa && *cols.back().kappa >= *cols.front().kappa) ++holds;
  }
  return {complete && holds >= 2, std::to_string(holds) + "/" + std::to_string(seeds.size()) +
                                      " seeds with kappa(50) >= kappa(5); kappa per seed (5/10/20/50)" + rows +
                                      (complete ? "" : "; some entries failed")};
}

Verdict associative_vanishing(const std::vector<std::pair<const Scenario *, const RunResult *>> &runs) {
  double worst = 0.0;
  std::size_t checked = 0, converged_runs = 0;
  for (const auto &[s, r] : runs) {
    if (!r->all_converged) continue;
    ++converged_runs;
    const double diag = s->workspace.diagonal();
    for (std::size_t i = 0; i < s->agents.size(); ++i) {
      const auto step = r->agents[i].convergence_step;
      for (const Sample &smp : r->trajectories[i].samples) {
        if (smp.step < *step) continue;
        worst = std::max(worst, norm2(smp.position - s->agents[i].target) / (diag * diag));
        ++checked;
      }
    }
  }
  return {converged_runs > 0 && worst < 1e-6,
          std::to_string(converged_runs) + " converged runs, " + std::to_string(checked) +
              " post-convergence samples; worst contribution / diag^2 " + fmt("%.2e", worst)};
}

std::string suite_artifacts(const std::vector<SuiteColumn> &cols) {
  std::ostringstream os;
  os << format_suite_table(cols);
  for (const auto &col : cols) {
    if (!col.runs) continue;
    const Scenario s = generate(col.spec, col.params);
    write_trajectories_csv(os, col.runs->mnf);
    write_trajectories_csv(os, col.runs->dnf);
    os << metrics_to_json(summarize(s, col.runs->mnf, &col.runs->dnf)).dump();
    os << metrics_to_json(summarize(s, col.runs->dnf, &col.runs->mnf)).dump();
  }
  return os.str();
}

Verdict determinism(const std::vector<SuiteColumn> &first, const std::vector<SuiteEntry> &entries,
                    std::uint64_t seed) {
  const auto again = run_suites(entries, {seed}, true).front();
  const std::string a = suite_artifacts(first);
  const std::string b = suite_artifacts(again);
  return {a == b, "half-scale table1 seed " + std::to_string(seed) + " rerun: " + std::to_string(a.size()) +
                      " bytes of table, csv and metrics " + (a == b ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char **argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto want = [&](int c) { return wanted.empty() || wanted.count(c) > 0; };

  int failures = 0;
  auto report = [&](int n, double limit_s, const std::function<Verdict()> &fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs <= limit_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s  (%.1f s%s)\n", n, pass ? "PASS" : "FAIL", v.detail.c_str(), secs,
                in_time ? "" : ", over time budget");
    std::fflush(stdout);
  };

  if (want(1)) report(1, 120.0, confinement_soundness);
  if (want(2)) report(2, 30.0, gradient_correctness);
  if (want(3)) report(3, 30.0, limit_property);

  std::optional<TwoPhase> tp;
  if (want(4) || want(9)) tp = two_phase_run();
  if (want(4)) report(4, 60.0, [&] { return two_phase_structure(*tp); });

  const auto half = scaled_suite(table1_suite(), 0.5);
  std::vector<std::vector<SuiteColumn>> t1;
  double t1_secs = 0.0;
  if (want(5) || want(6) || want(9) || want(10)) {
    const auto t0 = std::chrono::steady_clock::now();
    t1 = run_suites(half, {7, 8, 9}, true);
    t1_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  if (want(5)) {
    report(5, 0.0, [&] {
      Verdict v = kappa_trend(t1);
      v.detail += "; suites took " + fmt("%.1f", t1_secs) + " s";
      if (t1_secs > 180.0) {
        v.pass = false;
        v.detail += " (over the 3 min budget)";
      }
      return v;
    });
  }
  if (want(6)) report(6, 0.0, [&] { return alpha_plausibility(t1); });
  if (want(7)) report(7, 300.0, fastest_at_dagger);
  if (want(8)) {
    report(8, 900.0, [] { return partial_associations(run_suites(table2_suite(), {7, 8, 9}, false)); });
  }
  if (want(9)) {
    report(9, 0.0, [&] {
      std::vector<Scenario> scenarios;
      for (const auto &cols : t1) {
        for (const auto &col : cols) scenarios.push_back(generate(col.spec, col.params));
      }
      std::vector<std::pair<const Scenario *, const RunResult *>> runs{{&tp->scenario, &tp->run}};
      std::size_t k = 0;
      for (const auto &cols : t1) {
        for (const auto &col : cols) {
          const Scenario *s = &scenarios[k++];
          if (col.runs) runs.push_back({s, &col.runs->mnf});
        }
      }
      return associative_vanishing(runs);
    });
  }
  if (want(10)) report(10, 0.0, [&] { return determinism(t1.front(), half, 7); });

  return failures == 0 ? 0 : 1;
}
