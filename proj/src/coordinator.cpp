#include "mnf/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mnf {

std::string_view to_string(Mode mode) { return mode == Mode::Mnf ? "mnf" : "dnf"; }

std::vector<std::optional<std::size_t>> RunResult::convergence_times() const {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(agents.size());
  for (const auto &a : agents) out.push_back(a.convergence_step);
  return out;
}

Vec2 gdc_step(Vec2 q, Vec2 gradient, double gamma, double max_step) {
  if (!is_finite(gradient)) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite gradient at (" << q.x << ", " << q.y << ")";
    throw NonFiniteGradient(os.str());
  }
  Vec2 disp = -gamma * gradient;
  const double len = norm(disp);
  if (len > max_step) disp *= max_step / len;
  return q + disp;
}

namespace {

// Per-agent field contexts whose peer and ally positions are refreshed in
// place from the shared position vector.
class ContextCache {
 public:
  ContextCache(const Scenario &scenario, const PotentialParams &params)
      : partition_(scenario) {
    const std::vector<Vec2> starts = scenario.start_positions();
    contexts_.reserve(scenario.agents.size());
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
      contexts_.push_back(make_field_context(scenario, starts, i, partition_, params));
      allies_.push_back(partition_.allies_of(i));
    }
  }

  FieldContext &refresh(std::size_t i, const std::vector<Vec2> &positions) {
    FieldContext &ctx = contexts_[i];
    std::size_t k = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
      if (j != i) ctx.peers[k++] = positions[j];
    }
    for (std::size_t a = 0; a < allies_[i].size(); ++a) {
      ctx.allies[a].position = positions[allies_[i][a]];
    }
    return ctx;
  }

  FieldContext &at(std::size_t i) { return contexts_[i]; }

 private:
  CoalitionPartition partition_;
  std::vector<FieldContext> contexts_;
  std::vector<std::vector<std::size_t>> allies_;
};

double kernel_clearance(Vec2 q, const FieldContext &ctx) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &o : ctx.obstacles) best = std::min(best, distance(q, o.center));
  if (ctx.workspace) best = std::min(best, std::abs(ctx.workspace->wall_distance(q)));
  return best;
}

[[noreturn]] void rethrow_with_context(const std::exception &e, int agent_id, std::size_t step,
                                       Vec2 q) {
  std::ostringstream os;
  os.precision(17);
  os << "agent " << agent_id << " at step " << step << " position (" << q.x << ", " << q.y
     << "): " << e.what();
  if (dynamic_cast<const SingularityError *>(&e)) throw SingularityError(os.str(), q);
  throw NonFiniteGradient(os.str());
}

class Simulation {
 public:
  Simulation(const Scenario &scenario, const SimConfig &cfg)
      : scenario_(scenario), cfg_(cfg), cache_(scenario, cfg.params),
        epsilon_(cfg.epsilon_for(scenario.workspace)) {
    cfg_.params.validate();
    const std::size_t n = scenario.agents.size();
    positions_ = scenario.start_positions();
    phases_.assign(n, Phase::Planning);
    progress_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      progress_[i].anchor = distance(positions_[i], scenario.agents[i].target);
    }
    result_.mode = cfg.mode;
    result_.agents.resize(n);
    result_.trajectories.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      result_.agents[i].agent_id = scenario.agents[i].id;
      result_.trajectories[i].agent_id = scenario.agents[i].id;
    }
    if (cfg.mode == Mode::Dnf) dnf_ = cfg.dnf.resolved(cache_.at(0));
    if (cfg.mode == Mode::Mnf) prepare_confinement();
  }

  RunResult run() {
    const std::size_t n = scenario_.agents.size();
    result_.min_inter_agent_distance = std::numeric_limits<double>::infinity();
    result_.min_obstacle_clearance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) record(i, 0);
    track_clearance();

    if (cfg_.sequential) {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t step = 0;
        while (phases_[i] != Phase::Converged && step < cfg_.max_steps) {
          ++step;
          const Vec2 next = advance(i, step, positions_);
          positions_[i] = next;
          settle(i, step);
          track_clearance();
        }
        result_.steps = std::max(result_.steps, step);
      }
    } else {
      std::vector<Vec2> next(n);
      for (std::size_t step = 1; step <= cfg_.max_steps; ++step) {
        if (std::all_of(phases_.begin(), phases_.end(),
                        [](Phase p) { return p == Phase::Converged; })) {
          break;
        }
        // Every gradient reads the same snapshot; updates land together.
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = phases_[i] == Phase::Converged ? positions_[i] : advance(i, step, positions_);
        }
        positions_ = next;
        for (std::size_t i = 0; i < n; ++i) {
          if (phases_[i] != Phase::Converged) settle(i, step);
        }
        track_clearance();
        result_.steps = step;
      }
    }

    result_.all_converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      result_.agents[i].final_distance = distance(positions_[i], scenario_.agents[i].target);
      result_.all_converged = result_.all_converged && result_.agents[i].converged();
    }
    if (n < 2) result_.min_inter_agent_distance = std::numeric_limits<double>::infinity();
    return std::move(result_);
  }

 private:
  void prepare_confinement() {
    const std::size_t n = scenario_.agents.size();
    alphas_.resize(n);
    predicates_.reserve(n);
    result_.criticality.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = confinement_radius(scenario_, i, cfg_.include_agent_targets);
      predicates_.emplace_back(scenario_.agents[i].target, r);
      result_.agents[i].confinement_radius = r;
      if (cfg_.fixed_alpha) {
        alphas_[i] = *cfg_.fixed_alpha;
        result_.agents[i].alpha_dagger = *cfg_.fixed_alpha;
      } else if (cfg_.alpha_daggers) {
        const double ad = cfg_.alpha_daggers->at(i);
        result_.agents[i].alpha_dagger = ad;
        alphas_[i] = std::max(kMinAlpha, cfg_.alpha_multiplier * ad);
      } else {
        // Association sum frozen at the initial positions.
        CriticalityReport rep =
            solve_alpha_dagger(cache_.at(i), scenario_.workspace, r, cfg_.solver);
        result_.agents[i].alpha_dagger = rep.alpha_dagger;
        alphas_[i] = std::max(kMinAlpha, cfg_.alpha_multiplier * rep.alpha_dagger);
        result_.criticality[i] = std::move(rep);
      }
      result_.agents[i].alpha = alphas_[i];
      cache_.at(i).params.alpha = alphas_[i];
    }
  }

  // Gradient step of agent i against the given position snapshot.
  Vec2 advance(std::size_t i, std::size_t step, const std::vector<Vec2> &snapshot) {
    const Vec2 q = snapshot[i];
    const Vec2 qt = scenario_.agents[i].target;
    try {
      FieldContext &ctx = cache_.refresh(i, snapshot);
      if (cfg_.mode == Mode::Dnf) {
        const Vec2 g = dnf_.gain * grad_dnf_baseline(q, ctx, dnf_);
        return gdc_step(q, g, cfg_.params.gamma, cfg_.step_clip * dnf_clearance(q, ctx));
      }
      if (phases_[i] == Phase::Planning) {
        if (cfg_.resolve_alpha_each_step) {
          resolve_alpha(i, ctx);
        } else if (stalled(i, step, q)) {
          escalate_alpha(i, ctx);
        }
        const Vec2 g = grad_psi(q, ctx);
        return gdc_step(q, g, cfg_.params.gamma, cfg_.step_clip * psi_clearance(q, ctx));
      }
      const KernelGradient kg = grad_omega(q, qt, cfg_.params.beta);
      if (kg.at_target) return q;
      const double max_step = std::min(cfg_.step_clip * kernel_clearance(q, ctx), distance(q, qt));
      return gdc_step(q, kg.value, cfg_.params.gamma, max_step);
    } catch (const NumericalFault &e) {
      rethrow_with_context(e, scenario_.agents[i].id, step, q);
    }
  }

  void resolve_alpha(std::size_t i, FieldContext &ctx) {
    CriticalityReport rep =
        solve_alpha_dagger(ctx, scenario_.workspace, predicates_[i].radius, cfg_.solver);
    alphas_[i] = std::max(kMinAlpha, cfg_.alpha_multiplier * rep.alpha_dagger);
    ctx.params.alpha = alphas_[i];
    result_.agents[i].alpha = alphas_[i];
  }

  // Traps the solver cannot see (allies arriving shrink the association
  // sum; parked peers repel) leave the agent at a minimum outside its
  // region. Larger factors stay confining and pull such minima inward.
  // Checked once per window: the agent must have closed a tenth of its
  // confinement radius since the previous check.
  bool stalled(std::size_t i, std::size_t step, Vec2 q) {
    if (cfg_.stall_window == 0 || cfg_.fixed_alpha) return false;
    Progress &p = progress_[i];
    if (step - p.since < cfg_.stall_window) return false;
    const double d = distance(q, scenario_.agents[i].target);
    const bool slow = p.anchor - d < 0.1 * predicates_[i].radius;
    p.anchor = d;
    p.since = step;
    return slow && alphas_[i] < cfg_.solver.alpha_cap;
  }

  void escalate_alpha(std::size_t i, FieldContext &ctx) {
    alphas_[i] = std::min(2.0 * alphas_[i], cfg_.solver.alpha_cap);
    ctx.params.alpha = alphas_[i];
    result_.agents[i].alpha = alphas_[i];
    ++result_.agents[i].alpha_escalations;
  }

  // Latches phase changes after agent i moved and records its sample.
  void settle(std::size_t i, std::size_t step) {
    const Vec2 qt = scenario_.agents[i].target;
    if (distance(positions_[i], qt) < epsilon_) {
      positions_[i] = qt;  // converged agents park on their target
      phases_[i] = Phase::Converged;
      result_.agents[i].convergence_step = step;
    }
    record(i, step);
  }

  void record(std::size_t i, std::size_t step) {
    const Vec2 q = positions_[i];
    const Vec2 qt = scenario_.agents[i].target;
    double value = 0.0;
    try {
      FieldContext &ctx = cache_.refresh(i, positions_);
      if (cfg_.mode == Mode::Dnf) {
        value = dnf_baseline(q, ctx, dnf_);
      } else {
        if (phases_[i] == Phase::Planning && predicates_[i].inside(q)) {
          phases_[i] = Phase::Kernel;
          result_.agents[i].kernel_entry_step = step;
        }
        value = phases_[i] == Phase::Planning ? psi(q, ctx) : omega(q, qt, cfg_.params.beta);
      }
    } catch (const NumericalFault &e) {
      rethrow_with_context(e, scenario_.agents[i].id, step, q);
    }
    result_.trajectories[i].samples.push_back({step, q, value, phases_[i]});
  }

  void track_clearance() {
    double &agents_min = result_.min_inter_agent_distance;
    double &obstacle_min = result_.min_obstacle_clearance;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      for (std::size_t j = i + 1; j < positions_.size(); ++j) {
        agents_min = std::min(agents_min, distance(positions_[i], positions_[j]));
      }
      for (const auto &o : scenario_.obstacles) {
        obstacle_min = std::min(obstacle_min, distance(positions_[i], o.center) - o.radius);
      }
    }
  }

  const Scenario &scenario_;
  SimConfig cfg_;
  ContextCache cache_;
  double epsilon_;
  DnfParams dnf_;
  std::vector<Vec2> positions_;
  std::vector<Phase> phases_;
  std::vector<double> alphas_;
  std::vector<PhasePredicate> predicates_;
  struct Progress {
    double anchor = 0.0;    // distance to target at the last check
    std::size_t since = 0;  // step of the last check
  };
  std::vector<Progress> progress_;
  RunResult result_;
};

}  // namespace

RunResult run(const Scenario &scenario, const SimConfig &cfg) {
  const ValidationResult v = validate_scenario(scenario);
  if (!v.ok()) throw ScenarioError("invalid scenario: " + v.violations.front().message);
  if (cfg.max_steps == 0) throw ScenarioError("max_steps must be positive");
  if (scenario.agents.empty()) {
    RunResult empty;
    empty.mode = cfg.mode;
    empty.all_converged = true;
    empty.min_inter_agent_distance = std::numeric_limits<double>::infinity();
    empty.min_obstacle_clearance = std::numeric_limits<double>::infinity();
    return empty;
  }
  return Simulation(scenario, cfg).run();
}

}  // namespace mnf
