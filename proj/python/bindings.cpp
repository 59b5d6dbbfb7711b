#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <sstream>

#include "mnf/coordinator.hpp"
#include "mnf/criticality.hpp"
#include "mnf/experiments.hpp"
#include "mnf/io.hpp"
#include "mnf/metrics.hpp"
#include "mnf/scenario.hpp"

namespace py = pybind11;
using namespace mnf;

namespace {

// Scenarios and reports cross the boundary as JSON text; the Python side
// wraps them with json.loads / json.dumps.
using Point = std::array<double, 2>;

Vec2 vec(const Point &p) { return {p[0], p[1]}; }
Point point(Vec2 v) { return {v.x, v.y}; }

Scenario parse(const std::string &text) { return scenario_from_json(json::parse(text)); }

FieldContext initial_context(const Scenario &s, std::size_t index, std::optional<double> alpha) {
  if (index >= s.agents.size()) throw py::index_error("agent index out of range");
  const CoalitionPartition part(s);
  const auto starts = s.start_positions();
  FieldContext ctx = make_field_context(s, starts, index, part, s.params);
  if (alpha) ctx.params.alpha = *alpha;
  return ctx;
}

SimConfig config(const std::string &mode, std::size_t max_steps, std::optional<double> dnf_k) {
  SimConfig cfg;
  if (mode == "mnf") {
    cfg.mode = Mode::Mnf;
  } else if (mode == "dnf") {
    cfg.mode = Mode::Dnf;
  } else {
    throw py::value_error("mode must be 'mnf' or 'dnf'");
  }
  cfg.max_steps = max_steps;
  if (dnf_k) cfg.dnf.k = *dnf_k;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_mnf, m) {
  m.doc() = "Meta navigation function core";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<NumericalFault>(m, "NumericalFault", PyExc_ArithmeticError);

  m.def("generate", [](std::size_t n_agents, std::size_t n_obstacles, double width, double height,
                       std::uint64_t seed, std::size_t coalitions) {
    GeneratorSpec spec;
    spec.n_agents = n_agents;
    spec.n_obstacles = n_obstacles;
    spec.width = width;
    spec.height = height;
    spec.seed = seed;
    spec.coalitions = coalitions;
    return scenario_to_json(generate(spec)).dump();
  }, py::arg("n_agents"), py::arg("n_obstacles"), py::arg("width") = 30.0, py::arg("height") = 15.0,
     py::arg("seed") = 1, py::arg("coalitions") = 1);

  m.def("validate", [](const std::string &text) {
    std::vector<std::string> out;
    for (const auto &v : validate_scenario(parse(text)).violations) out.push_back(v.message);
    return out;
  });

  m.def("density", [](const std::string &text) { return density(parse(text)); });

  m.def("psi", [](const std::string &text, std::size_t index, const Point &q, std::optional<double> alpha) {
    const Scenario s = parse(text);
    return psi(vec(q), initial_context(s, index, alpha));
  }, py::arg("scenario"), py::arg("index"), py::arg("q"), py::arg("alpha") = py::none());

  m.def("grad_psi", [](const std::string &text, std::size_t index, const Point &q, std::optional<double> alpha) {
    const Scenario s = parse(text);
    return point(grad_psi(vec(q), initial_context(s, index, alpha)));
  }, py::arg("scenario"), py::arg("index"), py::arg("q"), py::arg("alpha") = py::none());

  m.def("omega", [](const Point &q, const Point &qt, double beta) { return omega(vec(q), vec(qt), beta); });
  m.def("grad_omega", [](const Point &q, const Point &qt, double beta) {
    return point(grad_omega(vec(q), vec(qt), beta).value);
  });

  m.def("confinement_radius", [](const std::string &text, std::size_t index) {
    return confinement_radius(parse(text), index);
  });

  m.def("solve_alpha_dagger", [](const std::string &text, std::size_t index) {
    const Scenario s = parse(text);
    const FieldContext ctx = initial_context(s, index, std::nullopt);
    return report_to_json(solve_alpha_dagger(ctx, s.workspace, confinement_radius(s, index))).dump();
  });

  m.def("kappa", [](const std::vector<std::optional<std::size_t>> &mnf_times,
                    const std::vector<std::optional<std::size_t>> &dnf_times) {
    return kappa(mnf_times, dnf_times).value;
  });

  m.def("run", [](const std::string &text, const std::string &mode, std::size_t max_steps,
                  std::optional<double> dnf_k) {
    const Scenario s = parse(text);
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run(s, config(mode, max_steps, dnf_k));
    }
    std::ostringstream csv;
    write_trajectories_csv(csv, r);
    return py::make_tuple(metrics_to_json(summarize(s, r)).dump(), csv.str());
  }, py::arg("scenario"), py::arg("mode") = "mnf", py::arg("max_steps") = 20000,
     py::arg("dnf_k") = py::none());

  m.def("compare", [](const std::string &text, std::size_t max_steps) {
    const Scenario s = parse(text);
    CompareResult c;
    {
      py::gil_scoped_release release;
      c = compare(s, config("mnf", max_steps, std::nullopt));
    }
    return metrics_to_json(summarize(s, c.mnf, &c.dnf)).dump();
  }, py::arg("scenario"), py::arg("max_steps") = 20000);
}
