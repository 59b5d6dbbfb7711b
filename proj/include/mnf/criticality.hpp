#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mnf/core.hpp"
#include "mnf/potentials.hpp"

namespace mnf {

/// Numerical knobs of the critical-point enumerator.
struct CpSearchOptions {
  int grid = 80;                      // seeds per axis
  double jitter = 0.25;               // seed jitter, fraction of a cell
  std::uint64_t seed = 0x6d6e66;      // jitter RNG seed
  double gradient_tolerance = 1e-8;   // relative to the field's gradient scale
  double dedupe = 1e-4;               // relative to the workspace diagonal
  int max_iterations = 100;           // Newton iterations per seed
};

struct CriticalSet {
  std::vector<Vec2> points;  // always contains `target`
  Vec2 target;
  double tolerance = 0.0;    // absolute gradient-norm threshold used
  double dedupe_radius = 0.0;

  /// Critical points other than the target.
  std::vector<Vec2> non_target() const;
};

struct CriticalityReport {
  CriticalSet critical_set;
  std::optional<Vec2> boundary_cp;
  Vec2 critical_vector;          // target - boundary_cp (zero when absent)
  double critical_radius = 0.0;  // ||critical_vector||
  double confinement_radius = 0.0;
  double alpha_dagger = 0.0;
  double residual = 0.0;         // confinement condition projected on the critical direction
  std::size_t trials = 0;        // alpha values examined
};

/// No confinement factor below the cap confines the critical set.
class UnconfinableError : public NumericalFault {
 public:
  UnconfinableError(const std::string &what, std::vector<Vec2> offending)
      : NumericalFault(what), offending_(std::move(offending)) {}
  const std::vector<Vec2> &offending() const { return offending_; }

 private:
  std::vector<Vec2> offending_;
};

/// Distance from qt to the nearest object surface: obstacle disks, walls
/// and, optionally, `other_targets`.
double confinement_radius(Vec2 qt, const Workspace &workspace, std::span<const Obstacle> obstacles,
                          std::span<const Vec2> other_targets);

/// Confinement radius of agent `index`. Throws ScenarioError when it is not
/// positive.
double confinement_radius(const Scenario &scenario, std::size_t index,
                          bool include_agent_targets = true);

/// Gradient-norm scale used to make tolerances relative: 2 (l1 + l3 A) diag.
double gradient_scale(const FieldContext &ctx, const Workspace &workspace);

/// Enumerates the critical points of psi inside the free workspace
/// (obstacle disks excluded). Deterministic for fixed options.
CriticalSet find_critical_set(const FieldContext &ctx, const Workspace &workspace,
                              const CpSearchOptions &options = {});

/// Non-target point farthest from the target; ties within the dedupe radius
/// resolve to the lexicographically smallest point.
std::optional<Vec2> boundary_cp(const CriticalSet &cs);

/// True when every non-target critical point lies within r (1 + rel_tol) of the target.
bool is_confined(const CriticalSet &cs, double r, double rel_tol = 1e-6);

/// Context used for confinement: obstacles and walls only; peers are dropped
/// from the repulsive set, allies still feed the association sum.
FieldContext confinement_context(const FieldContext &ctx);

/// Confinement condition at boundary point q_star, projected on the unit
/// critical direction.
double confinement_residual(const FieldContext &ctx, Vec2 q_star, double r, double alpha);

struct AlphaSolverOptions {
  CpSearchOptions search;
  double alpha_cap = 1e6;
  double relative_tolerance = 1e-4;  // bisection stops at (hi - lo) / hi below this
  bool include_peers = false;        // keep peers in the repulsive set while solving
  bool vanished_association = false; // solve with every ally already at its target (A = 0)
};

/// Smallest alpha > 1 (to the bisection tolerance) whose critical set is
/// confined within r of the target. Throws UnconfinableError when even the
/// cap fails.
CriticalityReport solve_alpha_dagger(const FieldContext &ctx, const Workspace &workspace, double r,
                                     const AlphaSolverOptions &options = {});

/// Lower end of the admissible alpha range.
inline constexpr double kMinAlpha = 1.0 + 1e-9;

}  // namespace mnf
