#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "mnf/core.hpp"
#include "mnf/potentials.hpp"

namespace mnf::testing {

/// Central-difference gradient of f at q with step h.
inline Vec2 fd_gradient(const std::function<double(Vec2)> &f, Vec2 q, double h) {
  const double gx = (f({q.x + h, q.y}) - f({q.x - h, q.y})) / (2.0 * h);
  const double gy = (f({q.x, q.y + h}) - f({q.x, q.y - h})) / (2.0 * h);
  return {gx, gy};
}

inline double relative_error(Vec2 a, Vec2 b) {
  const double scale = std::max({norm(a), norm(b), 1e-12});
  return norm(a - b) / scale;
}

/// Bare context: target, no walls, no peers.
inline FieldContext plain_context(Vec2 target, PotentialParams params) {
  FieldContext ctx;
  ctx.target = target;
  ctx.params = params;
  return ctx;
}

inline Scenario two_agent_scenario() {
  Scenario s;
  s.workspace = {10.0, 8.0};
  s.agents = {{0, {1.0, 1.0}, {8.0, 6.0}, 0}, {1, {8.0, 1.5}, {2.0, 6.5}, 0}};
  s.obstacles = {{0, {5.0, 4.0}, 0.5}};
  return s;
}

}  // namespace mnf::testing
