#include "mnf/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mnf {

namespace {

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json &j, const char *what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ScenarioError(std::string("expected [x, y] for ") + what);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T required(const json &obj, const char *key) {
  if (!obj.is_object() || !obj.contains(key)) throw ScenarioError(std::string("missing key '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &) {
    throw ScenarioError(std::string("bad value for '") + key + "'");
  }
}

json optional_steps(const std::optional<std::size_t> &t) {
  return t ? json(*t) : json(nullptr);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json scenario_to_json(const Scenario &s) {
  json doc;
  doc["workspace"] = {{"width", s.workspace.width}, {"height", s.workspace.height}};
  json agents = json::array();
  for (const auto &a : s.agents) {
    agents.push_back({{"id", a.id},
                      {"q0", vec_to_json(a.start)},
                      {"qt", vec_to_json(a.target)},
                      {"coalition", a.coalition}});
  }
  doc["agents"] = std::move(agents);
  json obstacles = json::array();
  for (const auto &o : s.obstacles) {
    obstacles.push_back({{"id", o.id}, {"center", vec_to_json(o.center)}, {"radius", o.radius}});
  }
  doc["obstacles"] = std::move(obstacles);
  const PotentialParams &p = s.params;
  doc["params"] = {{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"lambda3", p.lambda3},
                   {"alpha", p.alpha},     {"beta", p.beta},       {"gamma", p.gamma}};
  return doc;
}

Scenario scenario_from_json(const json &doc) {
  Scenario s;
  const json &ws = doc.contains("workspace") ? doc["workspace"] : json();
  s.workspace.width = required<double>(ws, "width");
  s.workspace.height = required<double>(ws, "height");
  if (doc.contains("agents")) {
    for (const auto &a : doc["agents"]) {
      Agent agent;
      agent.id = required<int>(a, "id");
      agent.start = vec_from_json(a.value("q0", json()), "q0");
      agent.target = vec_from_json(a.value("qt", json()), "qt");
      agent.coalition = a.value("coalition", 0);
      s.agents.push_back(agent);
    }
  }
  if (doc.contains("obstacles")) {
    for (const auto &o : doc["obstacles"]) {
      Obstacle obs;
      obs.id = required<int>(o, "id");
      obs.center = vec_from_json(o.value("center", json()), "center");
      obs.radius = o.value("radius", 0.0);
      s.obstacles.push_back(obs);
    }
  }
  if (doc.contains("params")) {
    const json &p = doc["params"];
    PotentialParams &q = s.params;
    q.lambda1 = p.value("lambda1", q.lambda1);
    q.lambda2 = p.value("lambda2", q.lambda2);
    q.lambda3 = p.value("lambda3", q.lambda3);
    q.alpha = p.value("alpha", q.alpha);
    q.beta = p.value("beta", q.beta);
    q.gamma = p.value("gamma", q.gamma);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ScenarioNotFound("scenario not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ScenarioError("cannot parse " + path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void save_scenario(const std::filesystem::path &path, const Scenario &scenario) {
  write_text_file(path, scenario_to_json(scenario).dump(2) + "\n");
}

void write_trajectories_csv(std::ostream &os, const RunResult &result) {
  os << "agent_id,step,x,y,potential,phase\n";
  for (const auto &traj : result.trajectories) {
    for (const auto &s : traj.samples) {
      os << traj.agent_id << ',' << s.step << ',' << format_number(s.position.x) << ','
         << format_number(s.position.y) << ',' << format_number(s.potential) << ','
         << to_string(s.phase) << '\n';
    }
  }
}

json metrics_to_json(const RunMetrics &m) {
  json doc;
  doc["mode"] = std::string(to_string(m.mode));
  doc["density"] = m.density;
  doc["completed"] = m.completed;
  doc["steps"] = m.steps;
  doc["min_clearance"] = m.min_clearance;
  doc["min_obstacle_clearance"] = m.min_obstacle_clearance;
  doc["kappa"] = m.kappa ? json(*m.kappa) : json(nullptr);
  if (!m.kappa_reason.empty()) doc["kappa_reason"] = m.kappa_reason;
  json agents = json::array();
  for (const auto &[id, t] : m.per_agent_time) {
    json a = {{"id", id}, {"steps", optional_steps(t)}};
    if (auto it = m.alpha_dagger.find(id); it != m.alpha_dagger.end()) a["alpha_dagger"] = it->second;
    if (auto it = m.alpha_final.find(id); it != m.alpha_final.end()) a["alpha"] = it->second;
    if (auto it = m.alpha_escalations.find(id); it != m.alpha_escalations.end()) {
      a["alpha_escalations"] = it->second;
    }
    agents.push_back(std::move(a));
  }
  doc["agents"] = std::move(agents);
  return doc;
}

json report_to_json(const CriticalityReport &r) {
  json doc;
  json pts = json::array();
  for (Vec2 p : r.critical_set.points) pts.push_back(vec_to_json(p));
  doc["critical_set"] = {{"points", std::move(pts)},
                         {"target", vec_to_json(r.critical_set.target)},
                         {"tolerance", r.critical_set.tolerance}};
  doc["boundary_cp"] = r.boundary_cp ? vec_to_json(*r.boundary_cp) : json(nullptr);
  doc["critical_vector"] = vec_to_json(r.critical_vector);
  doc["critical_radius"] = r.critical_radius;
  doc["confinement_radius"] = r.confinement_radius;
  doc["alpha_dagger"] = r.alpha_dagger;
  doc["residual"] = r.residual;
  doc["trials"] = r.trials;
  return doc;
}

}  // namespace mnf
