#pragma once

#include <algorithm>
#include <sstream>
#include <string>

#include "schedsim/trace.hpp"

namespace schedsim {

/// Render a trace as an SVG Gantt chart: one horizontal lane per machine,
/// one rectangle per run interval, small glyphs for pushes (up triangle),
/// replaces (diamond) and pops (down triangle, hollow for infeasible pops).
inline std::string gantt_svg(const Trace& trace) {
  const int m = std::max(1, trace.header.machines);
  const double lane_h = 26.0, left = 70.0, top = 30.0, right = 20.0;
  const double plot_w = 940.0;

  Tick t0 = 0, t1 = 1;
  bool any = false;
  const auto widen = [&](Tick a, Tick b) {
    if (!any) {
      t0 = a;
      t1 = b;
      any = true;
    } else {
      t0 = std::min(t0, a);
      t1 = std::max(t1, b);
    }
  };
  for (const RunInterval& iv : trace.run_intervals) widen(iv.start, iv.end);
  for (const StackEvent& ev : trace.stack_events) widen(ev.time, ev.time);
  if (t1 <= t0) t1 = t0 + 1;
  const double scale = plot_w / static_cast<double>(t1 - t0);
  const auto x = [&](Tick t) { return left + scale * static_cast<double>(t - t0); };
  const auto lane_y = [&](int mach) { return top + lane_h * mach; };
  const double height = top + lane_h * m + 40.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << (left + plot_w + right) << "\" height=\"" << height << "\">\n";
  os << "<style>text{font-family:monospace;font-size:11px;}</style>\n";
  for (int i = 0; i < m; ++i) {
    const double y = lane_y(i);
    os << "<line x1=\"" << left << "\" y1=\"" << (y + lane_h - 4) << "\" x2=\""
       << (left + plot_w) << "\" y2=\"" << (y + lane_h - 4)
       << "\" stroke=\"#ccc\"/>\n";
    os << "<text x=\"6\" y=\"" << (y + lane_h - 8) << "\">m" << i << "</text>\n";
  }
  for (const RunInterval& iv : trace.run_intervals) {
    const double y = lane_y(iv.machine);
    const int hue = (iv.job * 47) % 360;
    os << "<rect x=\"" << x(iv.start) << "\" y=\"" << (y + 4) << "\" width=\""
       << std::max(0.5, scale * static_cast<double>(iv.end - iv.start))
       << "\" height=\"" << (lane_h - 10) << "\" fill=\"hsl(" << hue
       << ",65%,62%)\" stroke=\"#555\" stroke-width=\"0.4\">"
       << "<title>job " << iv.job << " [" << iv.start << "," << iv.end
       << ")</title></rect>\n";
  }
  for (const StackEvent& ev : trace.stack_events) {
    if (ev.stack < 0) continue;
    const double cx = x(ev.time);
    const double y = lane_y(ev.stack) + 2;
    switch (ev.kind) {
      case StackEventKind::kPush:
        os << "<polygon points=\"" << (cx - 4) << "," << (y + 6) << " "
           << (cx + 4) << "," << (y + 6) << " " << cx << "," << (y - 1)
           << "\" fill=\"#222\"/>\n";
        break;
      case StackEventKind::kReplace:
        os << "<polygon points=\"" << cx << "," << (y - 1) << " " << (cx + 4)
           << "," << (y + 3) << " " << cx << "," << (y + 7) << " " << (cx - 4)
           << "," << (y + 3) << "\" fill=\"#a0f\"/>\n";
        break;
      case StackEventKind::kCompletionPop:
        os << "<polygon points=\"" << (cx - 4) << "," << (y - 1) << " "
           << (cx + 4) << "," << (y - 1) << " " << cx << "," << (y + 6)
           << "\" fill=\"#070\"/>\n";
        break;
      case StackEventKind::kInfeasiblePop:
        os << "<polygon points=\"" << (cx - 4) << "," << (y - 1) << " "
           << (cx + 4) << "," << (y - 1) << " " << cx << "," << (y + 6)
           << "\" fill=\"none\" stroke=\"#c00\"/>\n";
        break;
      default:
        break;
    }
  }
  os << "<text x=\"" << left << "\" y=\"" << (height - 12) << "\">t=" << t0
     << "</text>\n";
  os << "<text x=\"" << (left + plot_w - 60) << "\" y=\"" << (height - 12)
     << "\">t=" << t1 << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace schedsim
