#include "ddpen/bench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ddpen::bench {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVarianceNote =
    "The simulator is deterministic; run-to-run spread comes from seeded start perturbations "
    "(lateral offset and heading jitter), not from physics noise.";

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string failures_text(const CellStats& s) {
  std::string out;
  for (const auto& [reason, count] : s.failures) {
    if (!out.empty()) {
      out += ';';
    }
    out += reason + ":" + std::to_string(count);
  }
  return out;
}

}  // namespace

std::string format_cell(const CellStats& s) {
  if (s.completed == 0) {
    return "fail";
  }
  std::string cell = fixed(s.mean_s, 1) + "±" + fixed(s.std_s, 1);
  if (s.completed < s.runs) {
    cell += " (" + std::to_string(s.completed) + "/" + std::to_string(s.runs) + ")";
  }
  return cell;
}

std::string emit_table_csv(const BenchResult& result) {
  std::ostringstream out;
  out << "scenario,mode,direction,runs,completed,mean_s,std_s,cell,failures\n";
  for (const auto& [key, s] : result.cells) {
    out << key.scenario << ',' << sim::to_string(key.mode) << ',' << to_string(key.direction)
        << ',' << s.runs << ',' << s.completed << ',';
    if (s.completed > 0) {
      out << fixed(s.mean_s, 3) << ',' << fixed(s.std_s, 3);
    } else {
      out << ',';
    }
    out << ',' << format_cell(s) << ',' << failures_text(s) << '\n';
  }
  return out.str();
}

std::string emit_table_json(const BenchResult& result) {
  ordered_json j;
  j["provider"] = result.provider;
  j["note"] = kVarianceNote;
  j["cells"] = ordered_json::array();
  for (const auto& [key, s] : result.cells) {
    ordered_json c;
    c["scenario"] = key.scenario;
    c["mode"] = std::string(sim::to_string(key.mode));
    c["direction"] = std::string(to_string(key.direction));
    c["runs"] = s.runs;
    c["completed"] = s.completed;
    if (s.completed > 0) {
      c["mean_s"] = s.mean_s;
      c["std_s"] = s.std_s;
    } else {
      c["mean_s"] = nullptr;
      c["std_s"] = nullptr;
    }
    c["cell"] = format_cell(s);
    c["failures"] = s.failures;
    j["cells"].push_back(std::move(c));
  }
  j["runs"] = ordered_json::array();
  for (const auto& r : result.runs) {
    j["runs"].push_back({{"scenario", r.scenario},
                         {"mode", std::string(sim::to_string(r.mode))},
                         {"direction", std::string(to_string(r.direction))},
                         {"run", r.run_index},
                         {"seed", r.seed},
                         {"completed", r.result.completed},
                         {"elapsed_s", r.result.elapsed},
                         {"failure", std::string(sim::to_string(r.result.failure))},
                         {"waypoints_reached", r.result.waypoints_reached}});
  }
  return j.dump(2) + "\n";
}

std::string emit_plot(const BenchResult& result, const sim::World& world) {
  // Extent: course, obstacles and every executed pose.
  Point2 lo = world.waypoints.front();
  Point2 hi = lo;
  auto grow = [&](const Point2& p, double r = 0.0) {
    lo = lo.cwiseMin(p - Point2(r, r));
    hi = hi.cwiseMax(p + Point2(r, r));
  };
  for (const auto& p : world.waypoints) {
    grow(p);
  }
  for (const auto& o : world.obstacles) {
    grow(o.center, o.shape().bounding_radius());
  }
  for (const auto& r : result.runs) {
    if (r.scenario != world.name) {
      continue;
    }
    for (const auto& s : r.result.path) {
      grow(s.pose.position());
    }
  }
  const double margin = 3.0;
  lo -= Point2(margin, margin);
  hi += Point2(margin, margin);
  const double scale = 8.0;  // px per meter
  const double width = (hi.x() - lo.x()) * scale;
  const double height = (hi.y() - lo.y()) * scale;
  auto px = [&](const Point2& p) {
    return fixed((p.x() - lo.x()) * scale, 2) + "," + fixed((hi.y() - p.y()) * scale, 2);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 2) << ' ' << fixed(height, 2)
      << "\">\n"
      << "<title>" << world.name << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  svg << "<g id=\"obstacles\" fill=\"#888\">\n";
  for (const auto& o : world.obstacles) {
    if (o.type == sim::Obstacle::Type::kCylinder) {
      const auto c = px(o.center);
      const auto comma = c.find(',');
      svg << "<circle cx=\"" << c.substr(0, comma) << "\" cy=\"" << c.substr(comma + 1)
          << "\" r=\"" << fixed(o.size.x() * scale, 2) << "\"/>\n";
    } else {
      const double cs = std::cos(o.yaw);
      const double sn = std::sin(o.yaw);
      svg << "<polygon points=\"";
      const double hx = 0.5 * o.size.x();
      const double hy = 0.5 * o.size.y();
      const double corners[4][2] = {{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}};
      for (int i = 0; i < 4; ++i) {
        const Point2 p = o.center + Point2(cs * corners[i][0] - sn * corners[i][1],
                                           sn * corners[i][0] + cs * corners[i][1]);
        svg << (i ? " " : "") << px(p);
      }
      svg << "\"/>\n";
    }
  }
  svg << "</g>\n";

  svg << "<path id=\"course\" fill=\"none\" stroke=\"#ccc\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i < world.waypoints.size(); ++i) {
    svg << (i ? " L" : "M") << px(world.waypoints[i]);
  }
  svg << "\"/>\n";

  svg << "<g id=\"runs\" fill=\"none\" stroke-width=\"1.2\">\n";
  std::ostringstream markers;
  for (const auto& r : result.runs) {
    if (r.scenario != world.name || r.result.path.empty()) {
      continue;
    }
    const bool ddpen = r.mode == sim::ControllerMode::kDdpen;
    const char* color = ddpen ? "#1f77b4" : "#d62728";
    svg << "<polyline class=\"" << sim::to_string(r.mode) << ' ' << to_string(r.direction)
        << "\" stroke=\"" << color << "\"" << (ddpen ? "" : " stroke-dasharray=\"6,4\"")
        << " points=\"";
    // Decimate to 1 Hz to keep files small; always keep the final pose.
    const auto& path = r.result.path;
    for (std::size_t i = 0; i < path.size(); i += 10) {
      svg << (i ? " " : "") << px(path[i].pose.position());
    }
    if ((path.size() - 1) % 10 != 0) {
      svg << ' ' << px(path.back().pose.position());
    }
    svg << "\"/>\n";

    const auto start = px(path.front().pose.position());
    const auto end = px(path.back().pose.position());
    const auto sc = start.find(',');
    const auto ec = end.find(',');
    markers << "<circle class=\"start\" cx=\"" << start.substr(0, sc) << "\" cy=\""
            << start.substr(sc + 1) << "\" r=\"3\" fill=\"green\"/>\n";
    if (r.result.completed) {
      markers << "<circle class=\"end\" cx=\"" << end.substr(0, ec) << "\" cy=\""
              << end.substr(ec + 1) << "\" r=\"3\" fill=\"black\"/>\n";
    } else {
      const double x = std::stod(end.substr(0, ec));
      const double y = std::stod(end.substr(ec + 1));
      markers << "<path class=\"failure\" stroke=\"red\" stroke-width=\"2\" d=\"M" << fixed(x - 5, 2)
              << ',' << fixed(y - 5, 2) << " L" << fixed(x + 5, 2) << ',' << fixed(y + 5, 2)
              << " M" << fixed(x - 5, 2) << ',' << fixed(y + 5, 2) << " L" << fixed(x + 5, 2)
              << ',' << fixed(y - 5, 2) << "\"><title>" << sim::to_string(r.result.failure)
              << "</title></path>\n";
    }
  }
  svg << "</g>\n<g id=\"markers\">\n" << markers.str() << "</g>\n</svg>\n";
  return svg.str();
}

void write_report(const BenchResult& result, const ScenarioCatalog& catalog,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "results.csv") << emit_table_csv(result);
  std::ofstream(dir / "results.json") << emit_table_json(result);
  for (const auto& w : catalog.scenarios) {
    const bool present = std::any_of(result.runs.begin(), result.runs.end(),
                                     [&w](const RunOutcome& r) { return r.scenario == w.name; });
    if (present) {
      std::ofstream(dir / (w.name + ".svg")) << emit_plot(result, w);
    }
  }
}

}  // namespace ddpen::bench
