#include "ddpen/sim/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace ddpen::sim {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string run_result_to_json(const RunResult& r, bool include_path) {
  json j;
  j["scenario"] = r.scenario;
  j["mode"] = std::string(to_string(r.config.mode));
  j["provider"] = r.config.mode == ControllerMode::kDdpen ? r.config.provider : "none";
  j["seed"] = r.config.seed;
  j["completed"] = r.completed;
  j["elapsed_s"] = r.elapsed;
  j["failure"] = std::string(to_string(r.failure));
  j["waypoints_reached"] = r.waypoints_reached;
  j["cycles"] = r.cycles;
  j["optimizer_errors"] = r.optimizer_errors;
  j["degraded_subgoals"] = r.degraded_subgoals;
  j["degenerate_goals"] = r.degenerate_goals;
  j["start"] = {r.start.x, r.start.y, r.start.heading};
  j["config"] = {{"epochs_per_cycle", r.cycle.epochs_per_cycle},
                 {"epoch_budget_s", r.cycle.epoch_budget},
                 {"executor_rate_hz", r.cycle.executor_rate},
                 {"horizon", r.cycle.horizon},
                 {"dt_s", r.cycle.dt},
                 {"arrival_radius_m", r.cycle.arrival_radius},
                 {"final_tolerance_m", r.cycle.final_tolerance},
                 {"stall_timeout_s", r.cycle.stall_timeout},
                 {"progress_margin_m", r.cycle.progress_margin},
                 {"inflation_m", r.cycle.inflation},
                 {"perturbation", {{"lateral_m", r.cycle.perturb_lateral},
                                   {"heading_rad", r.cycle.perturb_heading},
                                   {"enabled", r.config.perturb}}},
                 {"weights", {{"control", r.cycle.costs.w_control},
                              {"goal", r.cycle.costs.w_goal},
                              {"obstacle", r.cycle.costs.w_obstacle},
                              {"subgoal", r.cycle.costs.w_subgoal},
                              {"obstacle_influence_m", r.cycle.costs.obstacle_influence}}}};
  if (!r.trace.empty()) {
    json trace = json::array();
    for (const auto& c : r.trace) {
      json sg = json::array();
      for (const auto& p : c.subgoals) {
        sg.push_back({p.x(), p.y()});
      }
      trace.push_back({{"t", c.t},
                       {"pose", {c.pose.x, c.pose.y, c.pose.heading}},
                       {"goal", {c.goal.x(), c.goal.y()}},
                       {"subgoals", sg},
                       {"plan_start", {c.plan_start.x, c.plan_start.y, c.plan_start.heading}},
                       {"plan_end", {c.plan_end.x, c.plan_end.y, c.plan_end.heading}},
                       {"cost", c.cost},
                       {"status", c.status}});
    }
    j["cycles_trace"] = std::move(trace);
  }
  if (include_path) {
    json path = json::array();
    for (const auto& s : r.path) {
      path.push_back({s.t, s.pose.x, s.pose.y, s.pose.heading});
    }
    j["path"] = std::move(path);
  }
  return j.dump(2);
}

void write_path_csv(std::ostream& out, const RunResult& r) {
  out << "t,x,y,heading\n";
  for (const auto& s : r.path) {
    out << fmt(s.t) << ',' << fmt(s.pose.x) << ',' << fmt(s.pose.y) << ',' << fmt(s.pose.heading)
        << '\n';
  }
}

void save_run(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "result.json") << run_result_to_json(r) << '\n';
  std::ofstream csv(dir / "path.csv");
  write_path_csv(csv, r);
  if (!csv) {
    throw std::runtime_error("save_run: cannot write " + (dir / "path.csv").string());
  }
}

}  // namespace ddpen::sim
