#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "bfbelp/analytics.hpp"
#include "bfbelp/app.hpp"
#include "bfbelp/compare.hpp"
#include "bfbelp/config.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace bfbelp;
using namespace bfbelp::app;
using testutil::fresh_dir;
using testutil::slurp;

namespace {

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("bfbelp_test_" + name + ".cfg");
  std::ofstream(p) << body;
  return p;
}

const std::string kShortLinear = "scenario = linear\nsim.duration = 12\n";

int shell(const std::string& args) {
  const std::string cmd = std::string(BFBELP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run writes log, stats and manifest") {
  const auto cfg = write_config("run", kShortLinear);
  const auto dir = fresh_dir("run");
  std::ostringstream out, err;
  REQUIRE(cmd_run({cfg.string(), 5, dir.string(), std::nullopt}, out, err) == kExitOk);
  for (const char* f : {"log.csv", "stats.csv", "timing.csv", "manifest.json"}) CHECK(fs::exists(dir / f));
  CHECK(out.str().find("Confidence interval X") != std::string::npos);

  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["tool"] == "bfbelp");
  CHECK(m["version"] == "0.3.0");
  CHECK(m["seeds"] == nlohmann::json::array({5}));
  char hash[40];
  std::snprintf(hash, sizeof hash, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(slurp(cfg))));
  CHECK(m["config_hash"] == hash);
  CHECK(m["config_path"] == cfg.string());
}

TEST_CASE("repeated runs give byte-identical logs for any worker count") {
  const auto cfg = write_config("repeat", kShortLinear);
  const auto a = fresh_dir("rep_a"), b = fresh_dir("rep_b"), c = fresh_dir("rep_c");
  std::ostringstream out, err;
  REQUIRE(cmd_run({cfg.string(), 9, a.string(), 1}, out, err) == kExitOk);
  REQUIRE(cmd_run({cfg.string(), 9, b.string(), 1}, out, err) == kExitOk);
  REQUIRE(cmd_run({cfg.string(), 9, c.string(), 4}, out, err) == kExitOk);
  const std::string la = slurp(a / "log.csv");
  CHECK(la.size() > 1000);
  CHECK(la == slurp(b / "log.csv"));
  CHECK(la == slurp(c / "log.csv"));
  CHECK(slurp(a / "stats.csv") == slurp(c / "stats.csv"));
  auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  ma.erase("out_dir");
  mb.erase("out_dir");
  CHECK(ma == mb);
}

TEST_CASE("missing or bad config exits with 2") {
  std::ostringstream out, err;
  CHECK(cmd_run({"/no/such/file.cfg", std::nullopt, fresh_dir("nocfg").string(), std::nullopt}, out, err) ==
        kExitUsage);
  CHECK(err.str().find("/no/such/file.cfg") != std::string::npos);

  const auto bad = write_config("bad", "scenario = linear\nflocking.r_z = 3\n");
  std::ostringstream err2;
  CHECK(cmd_run({bad.string(), std::nullopt, fresh_dir("badcfg").string(), std::nullopt}, out, err2) == kExitUsage);
  CHECK(err2.str().find("flocking.r_z") != std::string::npos);
}

TEST_CASE("executable exit codes") {
  CHECK(shell("run --config /no/such/file.cfg") == kExitUsage);
  CHECK(shell("") == kExitUsage);
  CHECK(shell("frobnicate") == kExitUsage);
  CHECK(shell("compare --config x.cfg --mode medium") == kExitUsage);
  CHECK(shell("--help") == kExitOk);
  const auto cfg = write_config("exe", "scenario = linear\nsim.duration = 3\n");
  const auto dir = fresh_dir("exe");
  CHECK(shell("run --config " + cfg.string() + " --seed 2 --out " + dir.string()) == kExitOk);
  CHECK(fs::exists(dir / "log.csv"));
}

TEST_CASE("batch pools trials") {
  const auto cfg = write_config("batch", "scenario = linear\nsim.duration = 15\n");
  SUBCASE("one trial pools to itself") {
    const auto dir = fresh_dir("batch1");
    std::ostringstream out, err;
    REQUIRE(cmd_batch({cfg.string(), 1, 4, dir.string(), 1}, out, err) == kExitOk);
    std::istringstream trials(slurp(dir / "trials.csv")), pooled(slurp(dir / "pooled.csv"));
    CHECK(read_trial_stats_csv(trials) == read_trial_stats_csv(pooled));
  }
  SUBCASE("several trials, concurrently") {
    const auto dir = fresh_dir("batch3");
    std::ostringstream out, err;
    REQUIRE(cmd_batch({cfg.string(), 3, 10, dir.string(), 2}, out, err) == kExitOk);
    for (int s : {10, 11, 12}) CHECK(fs::exists(dir / ("trial_" + std::to_string(s)) / "log.csv"));
    std::istringstream trials(slurp(dir / "trials.csv"));
    CHECK(read_trial_stats_csv(trials).size() == 3);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["partial"] == false);
    CHECK(m["seeds"] == nlohmann::json::array({10, 11, 12}));
    for (const auto& t : m["trials"]) CHECK(t["status"] == "complete");
    CHECK(fs::exists(dir / "summary.txt"));

    const auto serial = fresh_dir("batch3s");
    REQUIRE(cmd_batch({cfg.string(), 3, 10, serial.string(), 1}, out, err) == kExitOk);
    CHECK(slurp(serial / "trial_11" / "log.csv") == slurp(dir / "trial_11" / "log.csv"));
    CHECK(slurp(serial / "pooled.csv") == slurp(dir / "pooled.csv"));
  }
}

TEST_CASE("failed trials are flagged in the manifest") {
  // A single drone starts exactly on the obstacle centre, so every trial faults.
  const auto cfg = write_config("fault",
                                "scenario = linear\nsim.duration = 2\nsim.drone_count = 1\n"
                                "obstacle.0.x = -4\nobstacle.0.y = -4\n");
  const auto dir = fresh_dir("fault");
  std::ostringstream out, err;
  CHECK(cmd_batch({cfg.string(), 2, 1, dir.string(), 1}, out, err) == kExitRuntime);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["partial"] == true);
  for (const auto& t : m["trials"]) CHECK(t["status"].get<std::string>().rfind("failed", 0) == 0);
}

TEST_CASE("compare writes both tables") {
  const auto cfg = write_config("compare", "scenario = linear\n");
  const auto dir = fresh_dir("compare");
  std::ostringstream out, err;
  REQUIRE(cmd_compare({cfg.string(), "short", dir.string(), 4, 4}, out, err) == kExitOk);
  std::istringstream t(slurp(dir / "compare_timing.csv")), i(slurp(dir / "compare_intervals.csv"));
  const auto rows = read_timing_table(t);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.cycles == 90);
  CHECK(read_interval_table(i).size() == 6);
  CHECK(cmd_compare({cfg.string(), "medium", dir.string(), 4, 4}, out, err) == kExitUsage);
}

TEST_CASE("plot") {
  const auto cfg = write_config("plot", "scenario = linear\nsim.duration = 20\n");
  const auto run_dir = fresh_dir("plot_run");
  std::ostringstream out, err;
  REQUIRE(cmd_run({cfg.string(), 1, run_dir.string(), std::nullopt}, out, err) == kExitOk);
  const auto log_path = (run_dir / "log.csv").string();
  const auto a = fresh_dir("plot_a"), b = fresh_dir("plot_b");
  REQUIRE(cmd_plot({log_path, a.string()}, out, err) == kExitOk);
  REQUIRE(cmd_plot({log_path, b.string()}, out, err) == kExitOk);
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++count;
    CHECK(e.path().extension() == ".svg");
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(count >= 6);

  const auto empty_log = fs::temp_directory_path() / "bfbelp_test_empty.csv";
  std::ofstream(empty_log) << slurp(log_path).substr(0, slurp(log_path).find('\n') + 1);
  const auto none = fresh_dir("plot_none");
  std::ostringstream err2;
  CHECK(cmd_plot({empty_log.string(), none.string()}, out, err2) == kExitRuntime);
  CHECK_FALSE(fs::exists(none));

  const auto bad_log = fs::temp_directory_path() / "bfbelp_test_bad.csv";
  std::ofstream(bad_log) << slurp(log_path).substr(0, 2000) << "\n";
  std::ostringstream err3;
  CHECK(cmd_plot({bad_log.string(), fresh_dir("plot_bad").string()}, out, err3) == kExitRuntime);
  CHECK(err3.str().find("line ") != std::string::npos);
}

TEST_CASE("inputs are left untouched") {
  const auto cfg = write_config("untouched", kShortLinear);
  const std::string before = slurp(cfg);
  const auto dir = fresh_dir("untouched");
  std::ostringstream out, err;
  REQUIRE(cmd_run({cfg.string(), 1, dir.string(), std::nullopt}, out, err) == kExitOk);
  const std::string log_before = slurp(dir / "log.csv");
  REQUIRE(cmd_plot({(dir / "log.csv").string(), (dir / "plots").string()}, out, err) == kExitOk);
  CHECK(slurp(cfg) == before);
  CHECK(slurp(dir / "log.csv") == log_before);
}

TEST_CASE("output root comes from the environment when --out is omitted") {
  const auto root = fresh_dir("envroot");
  ::setenv(kOutRootEnv, root.c_str(), 1);
  const auto cfg = write_config("env", "scenario = linear\nsim.duration = 3\nsim.name = envcheck\n");
  std::ostringstream out, err;
  CHECK(cmd_run({cfg.string(), 6, "", std::nullopt}, out, err) == kExitOk);
  CHECK(fs::exists(root / "run-envcheck-6" / "log.csv"));
  CHECK(default_out_dir("x") == (root / "x").string());
  ::unsetenv(kOutRootEnv);
  CHECK(default_out_dir("x") == (fs::path("out") / "x").string());
}
