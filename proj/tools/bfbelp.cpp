#include <iostream>

#include <CLI11.hpp>

#include "bfbelp/app.hpp"

int main(int argc, char** argv) {
  using namespace bfbelp::app;
  CLI::App cli{"Online trajectory prediction and swarm tracking simulator"};
  cli.require_subcommand(1);

  RunArgs run;
  std::uint64_t run_seed = 0;
  std::size_t run_workers = 1;
  auto* run_cmd = cli.add_subcommand("run", "Run one scenario and write log, stats and manifest");
  run_cmd->add_option("--config", run.config, "Scenario config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", run_seed, "Seed (overrides sim.seed)");
  run_cmd->add_option("--out", run.out, "Output directory");
  auto* workers_opt = run_cmd->add_option("--workers", run_workers, "Worker threads inside the tick loop");

  BatchArgs batch;
  std::uint64_t batch_seed = 0;
  auto* batch_cmd = cli.add_subcommand("batch", "Run seeds seed..seed+trials-1 and pool the statistics");
  batch_cmd->add_option("--config", batch.config, "Scenario config file")->required();
  batch_cmd->add_option("--trials", batch.trials, "Number of trials")->check(CLI::PositiveNumber);
  auto* batch_seed_opt = batch_cmd->add_option("--seed", batch_seed, "Base seed");
  batch_cmd->add_option("--out", batch.out, "Output directory");
  batch_cmd->add_option("--workers", batch.workers, "Trials run concurrently")->check(CLI::PositiveNumber);

  CompareArgs compare;
  auto* compare_cmd = cli.add_subcommand("compare", "Compare BFBEL-P against the cubic curve fit");
  compare_cmd->add_option("--config", compare.config, "Scenario config file")->required();
  compare_cmd->add_option("--mode", compare.mode, "short (90 cycles) or long (840 cycles)")
      ->check(CLI::IsMember({"short", "long"}));
  compare_cmd->add_option("--out", compare.out, "Output directory");
  compare_cmd->add_option("--agents", compare.agents, "Agents in the multi-agent group")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--workers", compare.workers, "Threads for the multi-agent group")
      ->check(CLI::PositiveNumber);

  PlotArgs plot;
  auto* plot_cmd = cli.add_subcommand("plot", "Render SVG charts from a log CSV");
  plot_cmd->add_option("--log", plot.log, "Log CSV written by run")->required();
  plot_cmd->add_option("--out", plot.out, "Output directory");

  ScaleArgs scale;
  auto* scale_cmd = cli.add_subcommand("scale", "Measure prediction throughput with one and several workers");
  scale_cmd->add_option("--config", scale.config, "Scenario config file")->required();
  scale_cmd->add_option("--tasks", scale.tasks, "Predictions per batch")->check(CLI::PositiveNumber);
  scale_cmd->add_option("--workers", scale.workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) {
    if (*seed_opt) run.seed = run_seed;
    if (*workers_opt) run.workers = run_workers;
    return cmd_run(run, std::cout, std::cerr);
  }
  if (*batch_cmd) {
    if (*batch_seed_opt) batch.seed = batch_seed;
    return cmd_batch(batch, std::cout, std::cerr);
  }
  if (*compare_cmd) return cmd_compare(compare, std::cout, std::cerr);
  if (*plot_cmd) return cmd_plot(plot, std::cout, std::cerr);
  if (*scale_cmd) return cmd_scale(scale, std::cout, std::cerr);
  return kExitUsage;
}
