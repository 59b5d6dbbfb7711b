#include "mnf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mnf {

namespace {

[[noreturn]] void throw_singular(Vec2 q, const char *what) {
  std::ostringstream os;
  os.precision(17);
  os << "singular evaluation at (" << q.x << ", " << q.y << "): " << what;
  throw SingularityError(os.str(), q);
}

// Point objects of psi. Walls are handled separately because their
// projection points move with q, which changes the Hessian.
template <typename Fn>
void for_each_point_object(const FieldContext &ctx, Fn &&fn) {
  for (const auto &p : ctx.peers) fn(p);
  for (const auto &o : ctx.obstacles) fn(o.center);
}

struct RepulsionSums {
  double s = 0.0;  // sum 1/rho^2
  Vec2 grad;       // gradient of s
  Sym2 hess;       // Hessian of s
};

RepulsionSums repulsion_sums(Vec2 q, const FieldContext &ctx, bool want_hessian) {
  RepulsionSums r;
  auto point = [&](Vec2 obj) {
    const Vec2 v = q - obj;
    const double rho2 = norm2(v);
    if (rho2 < kSingularityGuard * kSingularityGuard) throw_singular(q, "repulsive object");
    const double inv2 = 1.0 / rho2;
    const double inv4 = inv2 * inv2;
    r.s += inv2;
    r.grad -= 2.0 * inv4 * v;
    if (want_hessian) r.hess += Sym2::identity(-2.0 * inv4) + (8.0 * inv4 * inv2) * Sym2::outer(v);
  };
  for_each_point_object(ctx, point);
  if (ctx.workspace) {
    for (Vec2 proj : ctx.workspace->wall_projections(q)) {
      const Vec2 v = q - proj;
      const double rho2 = norm2(v);
      if (rho2 < kSingularityGuard * kSingularityGuard) throw_singular(q, "wall");
      const double inv2 = 1.0 / rho2;
      const double inv4 = inv2 * inv2;
      r.s += inv2;
      r.grad -= 2.0 * inv4 * v;
      if (want_hessian) r.hess += (6.0 * inv4 * inv2) * Sym2::outer(v);
    }
  }
  return r;
}

FieldDerivatives evaluate_psi(Vec2 q, const FieldContext &ctx, bool want_grad, bool want_hessian) {
  const PotentialParams &p = ctx.params;
  const Vec2 u = q - ctx.target;
  const double d2 = norm2(u);
  const double d = std::sqrt(d2);
  const double attract = p.lambda1 + p.lambda3 * ctx.association();
  const double c = p.lambda2 / p.alpha;
  const double expo = 1.0 / p.alpha;

  const RepulsionSums rep = repulsion_sums(q, ctx, want_hessian);

  FieldDerivatives out;
  const double dp = d > 0.0 ? std::pow(d, expo) : 0.0;
  out.value = attract * d2 + c * dp * rep.s;
  if (!want_grad) return out;

  // Derivatives of d^expo; taken as zero at the target.
  Vec2 grad_dp;
  Sym2 hess_dp;
  if (d > 0.0) {
    const double dpm2 = dp / d2;  // d^(expo - 2)
    grad_dp = (expo * dpm2) * u;
    if (want_hessian) {
      hess_dp = Sym2::identity(expo * dpm2) + (expo * (expo - 2.0) * dpm2 / d2) * Sym2::outer(u);
    }
  }

  out.gradient = (2.0 * attract) * u + c * (rep.s * grad_dp + dp * rep.grad);
  if (want_hessian) {
    out.hessian = Sym2::identity(2.0 * attract) +
                  c * (rep.s * hess_dp + Sym2::sym_outer(grad_dp, rep.grad) + dp * rep.hess);
  }
  return out;
}

}  // namespace

double FieldContext::association() const {
  double a = 0.0;
  for (const auto &ally : allies) a += norm2(ally.position - ally.target);
  return a;
}

FieldContext FieldContext::with_alpha(double alpha) const {
  FieldContext c = *this;
  c.params.alpha = alpha;
  return c;
}

FieldContext make_field_context(const Scenario &scenario, std::span<const Vec2> positions,
                                std::size_t index, const CoalitionPartition &partition,
                                const PotentialParams &params) {
  if (positions.size() != scenario.agents.size()) {
    throw ScenarioError("position count does not match agent count");
  }
  FieldContext ctx;
  ctx.target = scenario.agents.at(index).target;
  ctx.obstacles = scenario.obstacles;
  ctx.workspace = scenario.workspace;
  ctx.params = params;
  ctx.peers.reserve(positions.size());
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j != index) ctx.peers.push_back(positions[j]);
  }
  for (std::size_t k : partition.allies_of(index)) {
    ctx.allies.push_back({positions[k], scenario.agents[k].target});
  }
  return ctx;
}

double psi(Vec2 q, const FieldContext &ctx) { return evaluate_psi(q, ctx, false, false).value; }

Vec2 grad_psi(Vec2 q, const FieldContext &ctx) {
  return evaluate_psi(q, ctx, true, false).gradient;
}

FieldDerivatives psi_derivatives(Vec2 q, const FieldContext &ctx) {
  return evaluate_psi(q, ctx, true, true);
}

double psi_clearance(Vec2 q, const FieldContext &ctx) {
  double best = std::numeric_limits<double>::infinity();
  for_each_point_object(ctx, [&](Vec2 obj) { best = std::min(best, distance(q, obj)); });
  if (ctx.workspace) best = std::min(best, std::abs(ctx.workspace->wall_distance(q)));
  return best;
}

double omega(Vec2 q, Vec2 target, double beta) { return beta * distance(q, target); }

KernelGradient grad_omega(Vec2 q, Vec2 target, double beta) {
  const Vec2 u = q - target;
  const double d = norm(u);
  if (d == 0.0) return {{}, true};
  return {(beta / d) * u, false};
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Planning: return "planning";
    case Phase::Kernel: return "kernel";
    case Phase::Converged: return "converged";
  }
  return "unknown";
}

PhasePredicate::PhasePredicate(Vec2 target_, double radius_) : target(target_), radius(radius_) {
  if (!(radius_ > 0.0)) throw ScenarioError("confinement radius must be positive");
}

MnfValue mnf(Vec2 q, const FieldContext &ctx, const PhasePredicate &pred) {
  if (pred.inside(q)) return {omega(q, ctx.target, ctx.params.beta), Phase::Kernel};
  return {psi(q, ctx), Phase::Planning};
}

Vec2 grad_mnf(Vec2 q, const FieldContext &ctx, const PhasePredicate &pred) {
  if (pred.inside(q)) return grad_omega(q, ctx.target, ctx.params.beta).value;
  return grad_psi(q, ctx);
}

// ---------------------------------------------------------------------------
// DNF baseline
// ---------------------------------------------------------------------------

DnfParams DnfParams::resolved(const FieldContext &ctx) const {
  DnfParams r = *this;
  const double diag = ctx.workspace ? ctx.workspace->diagonal() : 1.0;
  if (r.length_scale <= 0.0) r.length_scale = diag;
  if (r.sensing_radius <= 0.0) r.sensing_radius = 0.1 * diag;
  if (r.gain <= 0.0) r.gain = ctx.params.lambda1 * r.length_scale * r.length_scale;
  if (!(r.k >= 1.0)) throw ScenarioError("dnf k must be >= 1");
  return r;
}

namespace {

struct DnfEval {
  double value = 0.0;
  Vec2 gradient;
};

// Sums log b and its gradient over every object. Factor for an object with
// surface clearance: s(x) = 1 - (1 - x)^3 for x < 1, else 1, where
// x = (||q - o||^2 - rho^2) / R^2. s is C2 at x = 1.
template <typename Fn>
void for_each_dnf_object(Vec2 q, const FieldContext &ctx, Fn &&fn) {
  for (const auto &o : ctx.obstacles) fn(o.center, o.radius);
  for (const auto &p : ctx.peers) fn(p, 0.0);
  if (ctx.workspace) {
    for (Vec2 proj : ctx.workspace->wall_projections(q)) fn(proj, 0.0);
  }
}

DnfEval evaluate_dnf(Vec2 q, const FieldContext &ctx, const DnfParams &raw, bool want_grad) {
  const DnfParams dnf = raw.resolved(ctx);
  const double inv_r2 = 1.0 / (dnf.sensing_radius * dnf.sensing_radius);
  double log_b = 0.0;
  Vec2 grad_log_b;
  for_each_dnf_object(q, ctx, [&](Vec2 center, double radius) {
    const Vec2 v = q - center;
    const double dist = norm(v);
    if (dist - radius < kSingularityGuard) throw_singular(q, "dnf object boundary");
    const double x = (dist * dist - radius * radius) * inv_r2;
    if (x >= 1.0) return;
    const double om = 1.0 - x;
    const double s = 1.0 - om * om * om;
    log_b += std::log(s);
    if (want_grad) grad_log_b += (3.0 * om * om / s) * (2.0 * inv_r2) * v;
  });

  const Vec2 u = q - ctx.target;
  const double inv_l2 = 1.0 / (dnf.length_scale * dnf.length_scale);
  const double g = norm2(u) * inv_l2;
  DnfEval out;
  if (g == 0.0) return out;  // value and gradient vanish at the target

  const double log_g = std::log(g);
  const double a = dnf.k * log_g;
  const double hi = std::max(a, log_b);
  const double log_den = hi + std::log(std::exp(a - hi) + std::exp(log_b - hi));
  out.value = std::exp(log_g - log_den / dnf.k);
  if (!want_grad) return out;

  // grad = D^(-1/k) (b / D) [grad g - (g / k) grad log b]
  const double scale = std::exp(-log_den / dnf.k + (log_b - log_den));
  const Vec2 grad_g = (2.0 * inv_l2) * u;
  out.gradient = scale * (grad_g - (g / dnf.k) * grad_log_b);
  return out;
}

}  // namespace

double dnf_baseline(Vec2 q, const FieldContext &ctx, const DnfParams &dnf) {
  return evaluate_dnf(q, ctx, dnf, false).value;
}

Vec2 grad_dnf_baseline(Vec2 q, const FieldContext &ctx, const DnfParams &dnf) {
  return evaluate_dnf(q, ctx, dnf, true).gradient;
}

double dnf_clearance(Vec2 q, const FieldContext &ctx) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &o : ctx.obstacles) best = std::min(best, distance(q, o.center) - o.radius);
  for (const auto &p : ctx.peers) best = std::min(best, distance(q, p));
  if (ctx.workspace) best = std::min(best, ctx.workspace->wall_distance(q));
  return best;
}

}  // namespace mnf
