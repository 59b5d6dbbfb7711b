#include "mnf/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace mnf {

std::vector<Vec2> CriticalSet::non_target() const {
  std::vector<Vec2> out;
  for (Vec2 p : points) {
    if (p != target) out.push_back(p);
  }
  return out;
}

double confinement_radius(Vec2 qt, const Workspace &workspace, std::span<const Obstacle> obstacles,
                          std::span<const Vec2> other_targets) {
  double r = workspace.wall_distance(qt);
  for (const auto &o : obstacles) r = std::min(r, distance(qt, o.center) - o.radius);
  for (Vec2 t : other_targets) r = std::min(r, distance(qt, t));
  return r;
}

double confinement_radius(const Scenario &scenario, std::size_t index, bool include_agent_targets) {
  const Vec2 qt = scenario.agents.at(index).target;
  std::vector<Vec2> others;
  if (include_agent_targets) {
    for (std::size_t j = 0; j < scenario.agents.size(); ++j) {
      if (j != index) others.push_back(scenario.agents[j].target);
    }
  }
  const double r = confinement_radius(qt, scenario.workspace, scenario.obstacles, others);
  if (!(r > 0.0)) {
    throw ScenarioError("agent " + std::to_string(scenario.agents[index].id) +
                        " has non-positive confinement radius");
  }
  return r;
}

double gradient_scale(const FieldContext &ctx, const Workspace &workspace) {
  return 2.0 * (ctx.params.lambda1 + ctx.params.lambda3 * ctx.association()) * workspace.diagonal();
}

FieldContext confinement_context(const FieldContext &ctx) {
  FieldContext c = ctx;
  c.peers.clear();
  return c;
}

namespace {

bool in_free_space(Vec2 q, const FieldContext &ctx, const Workspace &ws) {
  if (!ws.contains(q)) return false;
  for (const auto &o : ctx.obstacles) {
    if (distance(q, o.center) <= o.radius) return false;
  }
  return true;
}

double safe_gradient_norm(Vec2 q, const FieldContext &ctx) {
  try {
    return norm(grad_psi(q, ctx));
  } catch (const SingularityError &) {
    return std::numeric_limits<double>::infinity();
  }
}

bool near_known(Vec2 q, const std::vector<Vec2> &known, double radius) {
  return std::any_of(known.begin(), known.end(), [&](Vec2 p) { return distance(p, q) <= radius; });
}

// Damped Newton iteration on grad psi = 0. Returns the converged point or
// nothing when the seed wanders out of the free space, stalls, or runs into
// an already known point.
std::optional<Vec2> refine(Vec2 q, const FieldContext &ctx, const Workspace &ws, double tol,
                           int max_iterations, const std::vector<Vec2> &known, double dedupe) {
  const double max_jump = 0.25 * ws.diagonal();
  try {
    FieldDerivatives cur = psi_derivatives(q, ctx);
    double gnorm = norm(cur.gradient);
    // Near a true root Newton contracts fast; a seed creeping toward a
    // non-zero minimum of the gradient norm is dropped.
    constexpr int kWindow = 10;
    double window_start = gnorm;
    for (int it = 0; it < max_iterations; ++it) {
      if (near_known(q, known, dedupe)) return std::nullopt;
      if (gnorm < tol) return q;
      if (it > 0 && it % kWindow == 0) {
        if (gnorm > 0.5 * window_start) return std::nullopt;
        window_start = gnorm;
      }
      const Sym2 &h = cur.hessian;
      const double det = h.det();
      Vec2 step;
      const double hscale = std::abs(h.xx) + std::abs(h.yy) + std::abs(h.xy);
      if (std::abs(det) > 1e-14 * hscale * hscale) {
        const Sym2 inv{h.yy / det, -h.xy / det, h.xx / det};
        step = -inv.apply(cur.gradient);
      } else {
        step = -(1.0 / std::max(hscale, 1e-12)) * cur.gradient;
      }
      const double limit = std::min(max_jump, 0.5 * psi_clearance(q, ctx));
      const double len = norm(step);
      if (!(len > 0.0) || !std::isfinite(len)) return std::nullopt;
      if (len > limit) step *= limit / len;

      bool accepted = false;
      for (int halving = 0; halving < 20; ++halving) {
        const Vec2 trial = q + step;
        if (ws.contains(trial) && psi_clearance(trial, ctx) > kSingularityGuard) {
          FieldDerivatives next = psi_derivatives(trial, ctx);
          const double nnorm = norm(next.gradient);
          if (nnorm < gnorm) {
            q = trial;
            cur = next;
            gnorm = nnorm;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) return std::nullopt;
    }
    if (gnorm < tol) return q;
  } catch (const SingularityError &) {
  }
  return std::nullopt;
}

void add_object_seeds(const FieldContext &ctx, Vec2 object, std::vector<Vec2> &seeds) {
  const double attract = ctx.params.lambda1 + ctx.params.lambda3 * ctx.association();
  const Vec2 away = object - ctx.target;
  const double d = norm(away);
  if (!(d > 0.0)) return;
  // Far-side balance of attraction and the object's own repulsion.
  const double rho = std::cbrt(ctx.params.lambda2 / (ctx.params.alpha * attract * d));
  const Vec2 dir = away / d;
  for (double m : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0}) seeds.push_back(object + (m * rho) * dir);
  constexpr int kRing = 12;
  for (double m : {0.5, 1.0, 2.0}) {
    for (int k = 0; k < kRing; ++k) {
      const double th = 2.0 * std::numbers::pi * k / kRing;
      seeds.push_back(object + (m * rho) * Vec2{std::cos(th), std::sin(th)});
    }
  }
}

}  // namespace

CriticalSet find_critical_set(const FieldContext &ctx, const Workspace &workspace,
                              const CpSearchOptions &options) {
  CriticalSet cs;
  cs.target = ctx.target;
  cs.tolerance = options.gradient_tolerance * gradient_scale(ctx, workspace);
  cs.dedupe_radius = options.dedupe * workspace.diagonal();

  // Coarse grid of gradient norms; local minima of the norm become seeds.
  const int n = std::max(options.grid, 2);
  const double dx = workspace.width / n;
  const double dy = workspace.height / n;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jit(-options.jitter, options.jitter);
  std::vector<Vec2> nodes(static_cast<std::size_t>(n) * n);
  std::vector<double> gnorm(nodes.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double jx = jit(rng);
      const double jy = jit(rng);
      const Vec2 q{(i + 0.5 + jx) * dx, (j + 0.5 + jy) * dy};
      const std::size_t idx = static_cast<std::size_t>(j) * n + i;
      nodes[idx] = q;
      gnorm[idx] = in_free_space(q, ctx, workspace) ? safe_gradient_norm(q, ctx)
                                                    : std::numeric_limits<double>::infinity();
    }
  }

  std::vector<Vec2> seeds;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * n + i;
      if (!std::isfinite(gnorm[idx])) continue;
      bool local_min = true;
      for (int oj = -1; oj <= 1 && local_min; ++oj) {
        for (int oi = -1; oi <= 1; ++oi) {
          if (oi == 0 && oj == 0) continue;
          const int ii = i + oi;
          const int jj = j + oj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          if (gnorm[static_cast<std::size_t>(jj) * n + ii] < gnorm[idx]) {
            local_min = false;
            break;
          }
        }
      }
      if (local_min) seeds.push_back(nodes[idx]);
    }
  }
  for (const auto &o : ctx.obstacles) add_object_seeds(ctx, o.center, seeds);
  for (Vec2 p : ctx.peers) add_object_seeds(ctx, p, seeds);

  cs.points.push_back(ctx.target);
  for (Vec2 s : seeds) {
    if (!in_free_space(s, ctx, workspace)) continue;
    const auto found = refine(s, ctx, workspace, cs.tolerance, options.max_iterations, cs.points,
                              cs.dedupe_radius);
    if (found && in_free_space(*found, ctx, workspace)) cs.points.push_back(*found);
  }
  std::sort(cs.points.begin() + 1, cs.points.end());
  return cs;
}

std::optional<Vec2> boundary_cp(const CriticalSet &cs) {
  std::optional<Vec2> best;
  double best_d = -1.0;
  for (Vec2 p : cs.non_target()) {
    const double d = distance(p, cs.target);
    if (!best || d > best_d + cs.dedupe_radius) {
      best = p;
      best_d = d;
    } else if (std::abs(d - best_d) <= cs.dedupe_radius && p < *best) {
      best = p;
      best_d = std::max(d, best_d);
    }
  }
  return best;
}

bool is_confined(const CriticalSet &cs, double r, double rel_tol) {
  const double limit = r * (1.0 + rel_tol);
  return std::all_of(cs.points.begin(), cs.points.end(),
                     [&](Vec2 p) { return distance(p, cs.target) <= limit; });
}

double confinement_residual(const FieldContext &ctx, Vec2 q_star, double r, double alpha) {
  const PotentialParams &p = ctx.params;
  const double a_sum = ctx.association();
  double b_sum = 0.0;
  Vec2 c_sum;
  auto add = [&](Vec2 obj) {
    const Vec2 w = q_star - obj;
    const double dist = norm(w);
    b_sum += 1.0 / (dist * dist * dist);
    c_sum += w / (dist * dist * dist * dist);
  };
  for (const auto &o : ctx.obstacles) add(o.center);
  if (ctx.workspace) {
    for (Vec2 proj : ctx.workspace->wall_projections(q_star)) add(proj);
  }
  const Vec2 v = ctx.target - q_star;
  const double vn = norm(v);
  if (!(vn > 0.0)) return 0.0;
  const double rp = std::pow(r, 1.0 / alpha);
  const Vec2 res = (2.0 * (p.lambda1 + a_sum * p.lambda3) * alpha * alpha) * v -
                   (2.0 * p.lambda2 * alpha * rp) * c_sum + (b_sum * p.lambda2 * r * r * rp) * v;
  return dot(res, v / vn);
}

CriticalityReport solve_alpha_dagger(const FieldContext &ctx_in, const Workspace &workspace, double r,
                                     const AlphaSolverOptions &options) {
  if (!(r > 0.0)) throw ScenarioError("confinement radius must be positive");
  FieldContext ctx = options.include_peers ? ctx_in : confinement_context(ctx_in);
  if (options.vanished_association) ctx.allies.clear();

  CriticalityReport report;
  report.confinement_radius = r;
  auto trial = [&](double alpha) {
    ++report.trials;
    return find_critical_set(ctx.with_alpha(alpha), workspace, options.search);
  };

  double lo = kMinAlpha;
  double hi = 0.0;
  CriticalSet hi_set = trial(lo);
  if (is_confined(hi_set, r)) {
    hi = lo;
  } else {
    CriticalSet last = hi_set;
    double alpha = 2.0;
    for (;;) {
      alpha = std::min(alpha, options.alpha_cap);
      CriticalSet cs = trial(alpha);
      if (is_confined(cs, r)) {
        hi = alpha;
        hi_set = std::move(cs);
        break;
      }
      lo = alpha;
      last = std::move(cs);
      if (alpha >= options.alpha_cap) {
        std::vector<Vec2> offending;
        for (Vec2 p : last.non_target()) {
          if (distance(p, last.target) > r * (1.0 + 1e-6)) offending.push_back(p);
        }
        std::ostringstream os;
        os << "no confinement factor up to " << options.alpha_cap << " confines "
           << offending.size() << " critical point(s) within r = " << r;
        throw UnconfinableError(os.str(), std::move(offending));
      }
      alpha *= 2.0;
    }
    while ((hi - lo) / hi > options.relative_tolerance) {
      const double mid = 0.5 * (lo + hi);
      CriticalSet cs = trial(mid);
      if (is_confined(cs, r)) {
        hi = mid;
        hi_set = std::move(cs);
      } else {
        lo = mid;
      }
    }
  }

  report.alpha_dagger = hi;
  report.critical_set = std::move(hi_set);
  report.boundary_cp = boundary_cp(report.critical_set);
  if (report.boundary_cp) {
    report.critical_vector = report.critical_set.target - *report.boundary_cp;
    report.critical_radius = norm(report.critical_vector);
    report.residual = confinement_residual(ctx.with_alpha(hi), *report.boundary_cp, r, hi);
  }
  return report;
}

}  // namespace mnf
