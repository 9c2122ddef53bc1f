// Command line front end: dataset generation, single-shot planning,
// training, provider evaluation, simulation runs and the benchmark matrix.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddpen/bench/report.hpp"
#include "ddpen/ddp/optimizer.hpp"
#include "ddpen/grid/costmap_io.hpp"
#include "ddpen/planner/dataset.hpp"
#include "ddpen/sim/serialization.hpp"
#include "ddpen/subgoal/approximator.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(std::stod(item));
  }
  if (out.size() != expected) {
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) +
                                         " comma separated numbers");
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

std::unique_ptr<ddpen::subgoal::SubGoalProvider> provider_from(const std::string& name,
                                                               const std::string& checkpoint) {
  return ddpen::subgoal::make_provider(ddpen::subgoal::parse_provider_kind(name), checkpoint);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ddpen;
  CLI::App app{"ddpen: DDP with sub-goal escape, planner, dataset and benchmark tools"};
  app.require_subcommand(1);
  int exit_code = 0;

  // dataset generate
  auto* dataset = app.add_subcommand("dataset", "Synthetic costmap dataset");
  dataset->require_subcommand(1);
  auto* generate = dataset->add_subcommand("generate", "Generate maps, A* paths and sub-goals");
  planner::DatasetParams dparams;
  std::string dataset_out;
  generate->add_option("--n", dparams.n_maps, "Number of maps")->required();
  generate->add_option("--seed", dparams.seed, "Master seed");
  generate->add_option("--goals-per-map", dparams.goals_per_map, "Border goals per map");
  generate->add_option("--out", dataset_out, "Output directory")->required();
  generate->callback([&] {
    const planner::Dataset ds = planner::generate_dataset(dparams);
    planner::write_dataset(ds, dataset_out);
    std::printf("%zu records from %zu maps (%zu skipped, %zu unreachable goals) -> %s\n",
                ds.stats.records, ds.stats.maps_attempted, ds.stats.skipped_maps,
                ds.stats.unreachable_goals, dataset_out.c_str());
  });

  // plan
  auto* plan = app.add_subcommand("plan", "Optimize one trajectory on a stored costmap");
  std::string map_path, start_text, goal_text, subgoal_text, plan_out, plan_report;
  bool use_ddpen = false;
  int horizon = 50;
  plan->add_option("--map", map_path, "Costmap .pgm (with .json sidecar)")->required();
  plan->add_option("--start", start_text, "X,Y,HEADING")->required();
  plan->add_option("--goal", goal_text, "X,Y")->required();
  plan->add_option("--subgoal", subgoal_text, "Explicit sub-goal X,Y (implies --ddpen)");
  plan->add_flag("--ddpen", use_ddpen, "Add oracle sub-goals from the map center");
  plan->add_option("--horizon", horizon, "Steps of 0.1 s");
  plan->add_option("--out", plan_out, "Trajectory CSV");
  plan->add_option("--report", plan_report, "Optimizer report JSON");
  plan->callback([&] {
    const grid::CostMap map = grid::load_costmap(map_path);
    const grid::DistanceField field = grid::distance_field(map);
    const auto s = parse_numbers(start_text, 3, "--start");
    const auto g = parse_numbers(goal_text, 2, "--goal");
    ddp::OptimizeContext ctx;
    ctx.field = &field;
    ctx.goal = Point2(g[0], g[1]);
    if (!subgoal_text.empty()) {
      const auto sg = parse_numbers(subgoal_text, 2, "--subgoal");
      ctx.subgoals = {Point2(sg[0], sg[1])};
    } else if (use_ddpen) {
      const auto p = subgoal::OracleProvider().predict({map, ctx.goal});
      ctx.subgoals.assign(p.positions.begin(), p.positions.end());
    }
    const std::vector<dynamics::Control> zeros(static_cast<std::size_t>(horizon));
    const auto report = ddp::optimize({s[0], s[1], s[2]}, zeros, ctx);
    if (!plan_out.empty()) {
      std::ofstream out(plan_out);
      dynamics::write_trajectory_csv(out, report.trajectory);
    }
    json j = {{"status", ddp::to_string(report.status)},
              {"diagnostic", report.diagnostic},
              {"iterations", report.epochs},
              {"accepted", report.accepted},
              {"rejected", report.rejected},
              {"cost_trace", report.cost_trace},
              {"regularization_trace", report.regularization_trace}};
    if (!plan_report.empty()) {
      std::ofstream(plan_report) << j.dump(2) << '\n';
    }
    std::printf("%s after %d iterations, cost %.6f -> %.6f\n", ddp::to_string(report.status),
                report.epochs, report.initial_cost(), report.final_cost());
    exit_code = report.ok() ? 0 : 1;
  });

  // train
  auto* train = app.add_subcommand("train", "Train the learned sub-goal approximator");
  std::string train_dataset, train_out;
  subgoal::ApproximatorConfig acfg;
  train->add_option("--dataset", train_dataset, "Dataset directory")->required();
  train->add_option("--out", train_out, "Checkpoint file")->required();
  train->add_option("--epochs", acfg.epochs);
  train->add_option("--seed", acfg.seed);
  train->add_option("--lr", acfg.learning_rate);
  train->add_option("--batch", acfg.batch_size);
  train->callback([&] {
    const planner::Dataset ds = planner::read_dataset(train_dataset);
    const auto report = subgoal::train_approximator(ds.records, acfg);
    subgoal::save_checkpoint(report.checkpoint, train_out);
    const auto& c = report.checkpoint;
    std::printf("best epoch %d: validation mse %.6f, median error %.3f m (baseline %.3f m)\n",
                c.best_epoch, c.validation_mse, c.validation_median_error_m,
                c.baseline_median_error_m);
  });

  // subgoal eval
  auto* sg = app.add_subcommand("subgoal", "Sub-goal provider tools");
  sg->require_subcommand(1);
  auto* eval = sg->add_subcommand("eval", "Compare a provider with stored sub-goals");
  std::string eval_dataset, eval_provider = "oracle", eval_ckpt;
  eval->add_option("--dataset", eval_dataset, "Dataset directory")->required();
  eval->add_option("--provider", eval_provider, "oracle|baseline|learned");
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint for the learned provider");
  eval->callback([&] {
    const planner::Dataset ds = planner::read_dataset(eval_dataset);
    const auto provider = provider_from(eval_provider, eval_ckpt);
    const auto ev = subgoal::evaluate_provider(*provider, ds.records);
    std::printf("%s: %zu records, %zu exact, median error %.4f m, mean %.4f m, median "
                "latency %.3f ms\n",
                provider->name().c_str(), ev.records, ev.exact_matches, ev.median_error_m,
                ev.mean_error_m, ev.median_latency_s * 1e3);
  });

  // sim run
  auto* sim_cmd = app.add_subcommand("sim", "Simulator");
  sim_cmd->require_subcommand(1);
  auto* run = sim_cmd->add_subcommand("run", "Drive one scenario");
  std::string scenario, mode = "ddpen", run_provider = "oracle", run_ckpt, run_out;
  std::uint64_t run_seed = 0;
  bool reverse = false;
  run->add_option("--scenario", scenario, "Scenario JSON")->required();
  run->add_option("--mode", mode, "ddp|ddpen");
  run->add_option("--provider", run_provider, "oracle|baseline|learned");
  run->add_option("--checkpoint", run_ckpt, "Checkpoint for the learned provider");
  run->add_option("--seed", run_seed);
  run->add_flag("--reverse", reverse, "Drive the course backward");
  bool trace = false;
  run->add_flag("--trace", trace, "Write a per-cycle trace into result.json");
  run->add_option("--out", run_out, "Output directory");
  run->callback([&] {
    sim::World world = sim::load_world(scenario);
    if (reverse) {
      world = world.reversed();
    }
    sim::SimConfig cfg;
    cfg.mode = sim::parse_mode(mode);
    cfg.seed = run_seed;
    cfg.record_cycles = trace;
    std::unique_ptr<subgoal::SubGoalProvider> provider;
    if (cfg.mode == sim::ControllerMode::kDdpen) {
      provider = provider_from(run_provider, run_ckpt);
      cfg.provider = provider->name();
    }
    const sim::RunResult r = sim::execute(world, cfg, provider.get());
    if (!run_out.empty()) {
      sim::save_run(r, run_out);
    }
    std::printf("%s %s: %s after %.1f s, %zu/%zu waypoints\n", world.name.c_str(), mode.c_str(),
                r.completed ? "completed" : std::string(sim::to_string(r.failure)).c_str(),
                r.elapsed, r.waypoints_reached, world.waypoints.size() - 1);
    exit_code = r.completed ? 0 : 2;
  });

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Scenario x mode x direction matrix");
  std::string catalog_dir = DDPEN_DEFAULT_CATALOG, modes_text = "ddp,ddpen", bench_out,
              bench_provider = "oracle", bench_ckpt, only;
  bench::MatrixOptions mopts;
  bench_cmd->add_option("--catalog", catalog_dir, "Scenario directory");
  bench_cmd->add_option("--modes", modes_text, "Comma separated modes");
  bench_cmd->add_option("--runs", mopts.runs_per_cell, "Runs per cell");
  bench_cmd->add_option("--seed-base", mopts.seed_base, "Seed of run 0");
  bench_cmd->add_option("--provider", bench_provider, "Sub-goal provider for DDPEN");
  bench_cmd->add_option("--checkpoint", bench_ckpt, "Checkpoint for the learned provider");
  bench_cmd->add_option("--scenarios", only, "Comma separated subset of scenario names");
  bench_cmd->add_option("--out", bench_out, "Output directory")->required();
  bench_cmd->callback([&] {
    const bench::ScenarioCatalog catalog = bench::load_catalog(catalog_dir);
    mopts.modes.clear();
    for (const auto& m : split(modes_text)) {
      mopts.modes.push_back(sim::parse_mode(m));
    }
    mopts.scenarios = split(only);
    const auto provider = provider_from(bench_provider, bench_ckpt);
    const auto result = bench::run_matrix(catalog, mopts, *provider);
    bench::write_report(result, catalog, bench_out);
    std::fputs(bench::emit_table_csv(result).c_str(), stdout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
