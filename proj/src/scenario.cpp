#include "mnf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mnf {

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Placed {
  Vec2 p;
  double radius;
};

}  // namespace

Scenario generate(const GeneratorSpec &spec, const PotentialParams &params) {
  if (!(spec.width > 0.0 && spec.height > 0.0)) throw ScenarioError("workspace must be positive");
  if (spec.coalitions == 0) throw ScenarioError("coalitions must be >= 1");
  Scenario s;
  s.workspace = {spec.width, spec.height};
  s.params = params;
  const double sep =
      spec.min_separation > 0.0 ? spec.min_separation : 0.02 * s.workspace.diagonal();

  std::mt19937_64 rng(spec.seed);
  std::vector<Placed> placed;
  std::size_t budget = spec.rejection_budget;

  auto place = [&](double radius) -> Vec2 {
    const double margin = sep + radius;
    if (2.0 * margin >= spec.width || 2.0 * margin >= spec.height) {
      throw InfeasibleSpecError("workspace too small for the separation");
    }
    while (budget > 0) {
      --budget;
      const Vec2 q{margin + unit(rng) * (spec.width - 2.0 * margin),
                   margin + unit(rng) * (spec.height - 2.0 * margin)};
      bool ok = true;
      for (const auto &other : placed) {
        if (distance(q, other.p) < sep + radius + other.radius) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed.push_back({q, radius});
        return q;
      }
    }
    throw InfeasibleSpecError("rejection budget exhausted: " + std::to_string(spec.n_agents) +
                              " agents, " + std::to_string(spec.n_obstacles) +
                              " obstacles do not fit");
  };

  for (std::size_t j = 0; j < spec.n_obstacles; ++j) {
    s.obstacles.push_back({static_cast<int>(j), place(spec.obstacle_radius), spec.obstacle_radius});
  }
  std::vector<Vec2> targets;
  for (std::size_t i = 0; i < spec.n_agents; ++i) targets.push_back(place(0.0));
  for (std::size_t i = 0; i < spec.n_agents; ++i) {
    Agent a;
    a.id = static_cast<int>(i);
    a.target = targets[i];
    a.start = place(0.0);
    a.coalition = static_cast<int>(i % spec.coalitions);
    s.agents.push_back(a);
  }
  return s;
}

std::vector<SuiteEntry> table1_suite() {
  struct Row {
    std::size_t agents, obstacles;
    double w, h, l2, l3;
  };
  const Row rows[] = {{20, 12, 30, 15, 12, 0.001},
                      {30, 21, 30, 15, 13, 0.0005},
                      {80, 40, 40, 25, 14, 0.0002},
                      {100, 50, 40, 25, 15, 0.0001}};
  std::vector<SuiteEntry> out;
  for (const Row &r : rows) {
    SuiteEntry e;
    e.label = std::to_string(r.agents) + "a/" + std::to_string(r.obstacles) + "o";
    e.spec.n_agents = r.agents;
    e.spec.n_obstacles = r.obstacles;
    e.spec.width = r.w;
    e.spec.height = r.h;
    e.params.beta = 10.0;
    e.params.lambda1 = 0.4;
    e.params.lambda2 = r.l2;
    e.params.lambda3 = r.l3;
    out.push_back(e);
  }
  return out;
}

std::vector<SuiteEntry> table2_suite() {
  const std::size_t coalitions[] = {5, 10, 20, 50};
  const double l2[] = {12, 13, 14, 15};
  const double l3[] = {0.001, 0.0005, 0.0002, 0.0001};
  std::vector<SuiteEntry> out;
  for (int c = 0; c < 4; ++c) {
    SuiteEntry e;
    e.label = std::to_string(coalitions[c]) + " coalitions";
    e.spec.n_agents = 100;
    e.spec.n_obstacles = 50;
    e.spec.width = 40;
    e.spec.height = 25;
    e.spec.coalitions = coalitions[c];
    e.params.beta = 10.0;
    e.params.lambda1 = 0.4;
    e.params.lambda2 = l2[c];
    e.params.lambda3 = l3[c];
    out.push_back(e);
  }
  return out;
}

std::vector<SuiteEntry> scaled_suite(std::vector<SuiteEntry> suite, double factor) {
  const double side = std::sqrt(factor);
  for (auto &e : suite) {
    e.spec.n_agents = static_cast<std::size_t>(std::lround(e.spec.n_agents * factor));
    e.spec.n_obstacles = static_cast<std::size_t>(std::lround(e.spec.n_obstacles * factor));
    e.spec.width *= side;
    e.spec.height *= side;
    e.spec.coalitions = std::max<std::size_t>(
        1, std::min(e.spec.coalitions, e.spec.n_agents == 0 ? 1 : e.spec.n_agents));
    e.label = std::to_string(e.spec.n_agents) + "a/" + std::to_string(e.spec.n_obstacles) + "o";
    if (e.spec.coalitions > 1) e.label += "/" + std::to_string(e.spec.coalitions) + "c";
  }
  return suite;
}

}  // namespace mnf
