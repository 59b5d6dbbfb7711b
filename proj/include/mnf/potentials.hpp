#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mnf/core.hpp"

namespace mnf {

/// Evaluations closer than this to a repulsive object raise SingularityError.
inline constexpr double kSingularityGuard = 1e-9;

struct AllyState {
  Vec2 position;
  Vec2 target;
};

/// Everything the field of one agent depends on. The subject is implicit:
/// `peers` and `allies` never contain it.
struct FieldContext {
  Vec2 target;
  std::vector<Vec2> peers;          // other agents' current positions (repulsive)
  std::vector<Obstacle> obstacles;  // repulsive through their centers
  std::vector<AllyState> allies;    // coalition members feeding the associative term
  std::optional<Workspace> workspace;  // walls; none = unbounded plane
  PotentialParams params;

  /// Sum over allies of squared distance-to-target.
  double association() const;
  FieldContext with_alpha(double alpha) const;
};

/// Builds agent `index`'s context from the current positions of every agent.
FieldContext make_field_context(const Scenario &scenario, std::span<const Vec2> positions,
                                std::size_t index, const CoalitionPartition &partition,
                                const PotentialParams &params);

// ---------------------------------------------------------------------------
// Confined function
// ---------------------------------------------------------------------------

double psi(Vec2 q, const FieldContext &ctx);
Vec2 grad_psi(Vec2 q, const FieldContext &ctx);

struct FieldDerivatives {
  double value = 0.0;
  Vec2 gradient;
  Sym2 hessian;
};

/// Value, gradient and Hessian in one pass. At the target itself the
/// d^(1/alpha) factor is not differentiable; gradient and Hessian of that
/// factor are taken as zero there.
FieldDerivatives psi_derivatives(Vec2 q, const FieldContext &ctx);

/// Distance from q to the nearest repulsive object of psi (peers, obstacle
/// centers, walls). +inf when there are none.
double psi_clearance(Vec2 q, const FieldContext &ctx);

// ---------------------------------------------------------------------------
// Attraction kernel and MNF switching
// ---------------------------------------------------------------------------

double omega(Vec2 q, Vec2 target, double beta);

struct KernelGradient {
  Vec2 value;
  bool at_target = false;  // omega is not differentiable at the target
};

KernelGradient grad_omega(Vec2 q, Vec2 target, double beta);

enum class Phase { Planning, Kernel, Converged };

std::string_view to_string(Phase phase);

/// Membership test for the confinement region ||q - target|| < radius.
struct PhasePredicate {
  Vec2 target;
  double radius = 0.0;

  PhasePredicate(Vec2 target_, double radius_);
  bool inside(Vec2 q) const { return distance(q, target) < radius; }
};

struct MnfValue {
  double value = 0.0;
  Phase phase = Phase::Planning;
};

/// psi outside the confinement region, omega inside it.
MnfValue mnf(Vec2 q, const FieldContext &ctx, const PhasePredicate &pred);
Vec2 grad_mnf(Vec2 q, const FieldContext &ctx, const PhasePredicate &pred);

// ---------------------------------------------------------------------------
// Navigation-function baseline
// ---------------------------------------------------------------------------

/// Rimon-Koditschek style field g / (g^k + b)^(1/k) with g = ||q-qt||^2 / L^2
/// and b a product of per-object clearance factors. Each factor saturates
/// to 1 beyond `sensing_radius` so b stays well scaled in crowded scenes.
struct DnfParams {
  double k = 48.0;
  double sensing_radius = 0.0;  // <= 0: 0.1 x workspace diagonal (or 1)
  double length_scale = 0.0;    // <= 0: workspace diagonal (or 1)
  double gain = 0.0;            // <= 0: lambda1 * L^2; applied by the coordinator

  DnfParams resolved(const FieldContext &ctx) const;
};

double dnf_baseline(Vec2 q, const FieldContext &ctx, const DnfParams &dnf = {});
Vec2 grad_dnf_baseline(Vec2 q, const FieldContext &ctx, const DnfParams &dnf = {});

/// Distance from q to the nearest DNF object surface (obstacle disks, peers,
/// walls).
double dnf_clearance(Vec2 q, const FieldContext &ctx);

}  // namespace mnf
