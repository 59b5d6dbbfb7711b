#include "mnf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mnf {

namespace {

std::string colour(std::size_t i) {
  static const char *palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % 10];
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string trajectory_svg(const Scenario &scenario, const RunResult &result) {
  const double scale = 800.0 / std::max(scenario.workspace.width, scenario.workspace.height);
  const double w = scenario.workspace.width * scale;
  const double h = scenario.workspace.height * scale;
  auto px = [&](Vec2 p) { return fmt(p.x * scale) + "," + fmt(h - p.y * scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
     << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
     << "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  for (const auto &o : scenario.obstacles) {
    os << "<circle cx=\"" << fmt(o.center.x * scale) << "\" cy=\"" << fmt(h - o.center.y * scale)
       << "\" r=\"" << fmt(std::max(o.radius * scale, 2.0)) << "\" fill=\"#444\"/>\n";
  }
  for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
    const auto &traj = result.trajectories[i];
    const std::string c = colour(i);
    std::string planning;
    std::string kernel;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
      const auto &s = traj.samples[k];
      const std::string pt = px(s.position) + " ";
      if (s.phase == Phase::Planning) {
        planning += pt;
      } else {
        if (kernel.empty() && k > 0) kernel += px(traj.samples[k - 1].position) + " ";
        kernel += pt;
      }
    }
    if (!planning.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\""
         << planning << "\"/>\n";
    }
    if (!kernel.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << c
         << "\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\" points=\"" << kernel << "\"/>\n";
    }
    if (i < scenario.agents.size()) {
      const Vec2 t = scenario.agents[i].target;
      const Vec2 s0 = scenario.agents[i].start;
      os << "<circle cx=\"" << fmt(s0.x * scale) << "\" cy=\"" << fmt(h - s0.y * scale)
         << "\" r=\"3\" fill=\"" << c << "\"/>\n";
      os << "<rect x=\"" << fmt(t.x * scale - 4) << "\" y=\"" << fmt(h - t.y * scale - 4)
         << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"" << c << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string potential_svg(const RunResult &result) {
  constexpr double kW = 800.0;
  constexpr double kH = 400.0;
  constexpr double kPad = 40.0;
  std::size_t max_step = 1;
  double vmax = 1e-12;
  for (const auto &t : result.trajectories) {
    for (const auto &s : t.samples) {
      max_step = std::max(max_step, s.step);
      vmax = std::max(vmax, s.potential);
    }
  }
  // log10(1 + v) keeps zero at the axis and compresses the early spike.
  const double ymax = std::log10(1.0 + vmax);
  auto x = [&](std::size_t step) { return kPad + (kW - 2 * kPad) * step / double(max_step); };
  auto y = [&](double v) { return kH - kPad - (kH - 2 * kPad) * std::log10(1.0 + v) / ymax; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\""
     << kH - kPad << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 8 << "\" font-size=\"12\">step (max "
     << max_step << ")</text>\n";
  os << "<text x=\"4\" y=\"" << kPad - 10 << "\" font-size=\"12\">log10(1 + potential), max "
     << fmt(vmax) << "</text>\n";
  for (std::size_t i = 0; i < result.trajectories.size(); ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << colour(i) << "\" stroke-width=\"1.2\" points=\"";
    for (const auto &s : result.trajectories[i].samples) {
      os << fmt(x(s.step)) << ',' << fmt(y(s.potential)) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mnf
