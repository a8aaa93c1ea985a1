#include "bfbelp/app.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bfbelp/analytics.hpp"
#include "bfbelp/compare.hpp"
#include "bfbelp/config.hpp"
#include "bfbelp/logio.hpp"
#include "bfbelp/parallel.hpp"
#include "bfbelp/plot.hpp"

#ifndef BFBELP_VERSION
#define BFBELP_VERSION "unknown"
#endif

namespace bfbelp::app {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

template <class F>
std::string to_text(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

ordered_json manifest_base(const std::string& command, const std::string& config_path, const std::string& config_text,
                           const std::string& out_dir) {
  ordered_json m;
  m["tool"] = "bfbelp";
  m["version"] = BFBELP_VERSION;
  m["command"] = command;
  m["config_path"] = config_path;
  m["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config_text));
  m["out_dir"] = out_dir;
  return m;
}

// Runs a command body and maps exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "bfbelp: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SimulationFault& e) {
    err << "bfbelp: simulation fault at tick " << e.tick() << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "bfbelp: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

struct LoadedConfig {
  std::string text;
  ScenarioConfig cfg;
};

LoadedConfig load(const std::string& path) {
  if (path.empty()) throw ConfigError("no config file given");
  LoadedConfig lc;
  lc.text = read_file(path);
  lc.cfg = parse_config_text(lc.text, path);
  return lc;
}

void write_trial_outputs(const fs::path& dir, const SimLog& log, const TrialStats& stats) {
  write_log_file((dir / "log.csv").string(), log);
  write_text(dir / "timing.csv", to_text([&](std::ostream& os) { write_timing_csv(os, log); }));
  write_text(dir / "stats.csv", to_text([&](std::ostream& os) { write_trial_stats_csv(os, {stats}); }));
}

}  // namespace

std::string default_out_dir(const std::string& leaf) {
  const char* root = std::getenv(kOutRootEnv);
  const fs::path base = (root && *root) ? fs::path(root) : fs::path("out");
  return (base / leaf).string();
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    LoadedConfig lc = load(args.config);
    if (args.seed) lc.cfg.seed = *args.seed;
    if (args.workers) lc.cfg.workers = *args.workers;
    lc.cfg.validate();
    const std::string dir = args.out.empty() ? default_out_dir("run-" + lc.cfg.name + "-" + std::to_string(lc.cfg.seed))
                                             : args.out;
    ensure_dir(dir);
    const SimLog log = run(lc.cfg);
    const TrialStats stats = summarize_trial(log, lc.cfg.seed);
    write_trial_outputs(dir, log, stats);

    ordered_json m = manifest_base("run", args.config, lc.text, dir);
    m["seeds"] = {lc.cfg.seed};
    m["workers"] = lc.cfg.workers;
    m["trials"] = ordered_json::array({{{"seed", lc.cfg.seed}, {"status", "complete"}, {"dir", "."}}});
    write_text(fs::path(dir) / "manifest.json", m.dump(2) + "\n");
    out << format_trial_table(stats, "Trial " + lc.cfg.name + " seed " + std::to_string(lc.cfg.seed));
    return kExitOk;
  });
}

int cmd_batch(const BatchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.trials < 1) throw ConfigError("--trials must be >= 1");
    if (args.workers < 1) throw ConfigError("--workers must be >= 1");
    LoadedConfig lc = load(args.config);
    const std::uint64_t base = args.seed.value_or(lc.cfg.seed);
    const std::string dir =
        args.out.empty() ? default_out_dir("batch-" + lc.cfg.name + "-" + std::to_string(base)) : args.out;
    ensure_dir(dir);

    ordered_json m = manifest_base("batch", args.config, lc.text, dir);
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < args.trials; ++i) seeds.push_back(base + i);
    m["seeds"] = seeds;
    m["pooling"] = "residuals concatenated across trials";
    m["partial"] = true;
    ordered_json trials = ordered_json::array();
    for (auto s : seeds) {
      trials.push_back({{"seed", s}, {"status", "pending"}, {"dir", "trial_" + std::to_string(s)}});
    }
    m["trials"] = trials;
    std::mutex mu;
    auto flush_manifest = [&] { write_text(fs::path(dir) / "manifest.json", m.dump(2) + "\n"); };
    flush_manifest();

    std::vector<TrialStats> stats(seeds.size());
    std::vector<ResidualSeries> residuals(seeds.size());
    std::vector<bool> ok(seeds.size(), false);
    WorkerPool pool(args.workers);
    pool.run(seeds.size(), [&](std::size_t i) {
      ScenarioConfig cfg = lc.cfg;
      cfg.seed = seeds[i];
      cfg.workers = 1;
      const fs::path tdir = fs::path(dir) / ("trial_" + std::to_string(seeds[i]));
      std::string status = "complete";
      try {
        ensure_dir(tdir.string());
        const SimLog log = run(cfg);
        residuals[i] = fused_residuals(log);
        stats[i] = summarize_trial(log, residuals[i], seeds[i]);
        write_trial_outputs(tdir, log, stats[i]);
        ok[i] = true;
      } catch (const std::exception& e) {
        status = std::string("failed: ") + e.what();
      }
      std::lock_guard lock(mu);
      m["trials"][i]["status"] = status;
      flush_manifest();
    });

    std::vector<TrialStats> good;
    std::vector<ResidualSeries> good_res;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (ok[i]) {
        good.push_back(stats[i]);
        good_res.push_back(residuals[i]);
      }
    }
    m["partial"] = good.size() != seeds.size();
    flush_manifest();
    if (good.empty()) throw SimulationFault(0, "every trial failed");

    const TrialStats pooled = pool_trials(good, good_res);
    write_text(fs::path(dir) / "trials.csv", to_text([&](std::ostream& os) { write_trial_stats_csv(os, good); }));
    write_text(fs::path(dir) / "pooled.csv", to_text([&](std::ostream& os) { write_trial_stats_csv(os, {pooled}); }));
    std::size_t consistent = 0;
    for (const auto& s : good) consistent += (s.p_x > 0.05 && s.p_y > 0.05) ? 1 : 0;
    std::ostringstream summary;
    summary << format_trial_table(pooled, "Pooled over " + std::to_string(good.size()) + " trials of " + lc.cfg.name);
    summary << "  Trials with p > 0.05 on both axes  " << consistent << " / " << good.size() << '\n';
    write_text(fs::path(dir) / "summary.txt", summary.str());
    out << summary.str();
    return good.size() == seeds.size() ? kExitOk : kExitRuntime;
  });
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    CompareMode mode;
    if (args.mode == "short") mode = CompareMode::kShort;
    else if (args.mode == "long") mode = CompareMode::kLong;
    else throw ConfigError("--mode must be short or long (got '" + args.mode + "')");
    LoadedConfig lc = load(args.config);
    const std::string dir = args.out.empty() ? default_out_dir("compare-" + lc.cfg.name + "-" + args.mode) : args.out;
    ensure_dir(dir);
    const CompareResult r = run_compare(lc.cfg, mode, args.agents, args.workers);
    const std::string timing = to_text([&](std::ostream& os) { write_timing_table(os, r); });
    const std::string intervals = to_text([&](std::ostream& os) { write_interval_table(os, r); });
    write_text(fs::path(dir) / "compare_timing.csv", timing);
    write_text(fs::path(dir) / "compare_intervals.csv", intervals);
    ordered_json m = manifest_base("compare", args.config, lc.text, dir);
    m["seeds"] = {lc.cfg.seed};
    m["mode"] = args.mode;
    m["cycles"] = compare_cycles(mode);
    m["agents"] = args.agents;
    m["workers"] = args.workers;
    write_text(fs::path(dir) / "manifest.json", m.dump(2) + "\n");
    out << timing << '\n' << intervals;
    return kExitOk;
  });
}

int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.log.empty()) throw ConfigError("no log file given");
    const SimLog log = read_log_file(args.log);
    const auto charts = standard_charts(log);
    const std::string dir = args.out.empty() ? default_out_dir("plots") : args.out;
    ensure_dir(dir);
    for (const auto& [name, svg] : charts) {
      write_text(fs::path(dir) / name, svg);
      out << (fs::path(dir) / name).string() << '\n';
    }
    return kExitOk;
  });
}

int cmd_scale(const ScaleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    LoadedConfig lc = load(args.config);
    const ScalingResult r = measure_scaling(lc.cfg, args.tasks, args.workers);
    char buf[200];
    std::snprintf(buf, sizeof buf, "tasks %zu  serial %.4f s  %zu workers %.4f s  speedup %.2f\n", r.tasks, r.serial_s,
                  r.workers, r.parallel_s, r.speedup());
    out << buf;
    return kExitOk;
  });
}

}  // namespace bfbelp::app
