#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "bfbelp/compare.hpp"
#include "bfbelp/config.hpp"
#include "bfbelp/csv.hpp"
#include "bfbelp/logio.hpp"
#include "bfbelp/plot.hpp"
#include "bfbelp/rng.hpp"
#include "test_util.hpp"

using namespace bfbelp;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string log_text(const SimLog& log) {
  std::ostringstream os;
  write_log_csv(os, log);
  return os.str();
}

}  // namespace

TEST_CASE("csv numbers round trip") {
  Rng rng(1);
  for (int k = 0; k < 5000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
    CHECK(csv::to_double(csv::fmt(v), "t") == v);
  }
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-320, std::numeric_limits<double>::max()}) {
    CHECK(csv::to_double(csv::fmt(v), "t") == v);
  }
  CHECK(std::isnan(csv::to_double(csv::fmt(NAN), "t")));
  CHECK(csv::fmt(std::int64_t{-42}) == "-42");
  CHECK(csv::parse_ids(csv::join_ids({0, 3, 12}), "t") == std::vector<int>{0, 3, 12});
  CHECK(csv::parse_ids("", "t").empty());
  CHECK_THROWS_AS(csv::to_double("1.5x", "ctx"), InputError);
  CHECK_THROWS_AS(csv::to_int("", "ctx"), InputError);
}

TEST_CASE("log csv round trip is exact") {
  auto cfg = testutil::short_linear(12.0);
  cfg.disabled_predictors = {2};
  cfg.disable_after = 5.0;
  const SimLog log = run(cfg);
  const std::string text = log_text(log);
  CHECK(text.rfind(std::string(kLogHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  const SimLog back = read_log_csv(in);
  CHECK(back == log);
  CHECK(back.obstacles.size() == log.obstacles.size());
  for (std::size_t k = 0; k < log.ticks.size(); ++k) CHECK(back.ticks[k].components == log.ticks[k].components);
  CHECK(log_text(back) == text);
}

TEST_CASE("log csv errors name the line") {
  const auto log = run(testutil::short_linear(2.0));
  const std::string text = log_text(log);
  auto message = [](const std::string& t) {
    std::istringstream in(t);
    try {
      read_log_csv(in);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("").find("line 1") != std::string::npos);
  CHECK(message("a,b,c\n").find("line 1") != std::string::npos);

  std::istringstream lines(text);
  std::string line, head;
  for (int k = 0; k < 10 && std::getline(lines, line); ++k) head += line + "\n";
  CHECK(message(head + "1,2\n").find("line 11") != std::string::npos);

  const std::size_t cut = text.find(",drone,");
  std::string broken = text;
  broken.replace(cut, 7, ",dorne,");
  CHECK(message(broken).find("unknown row kind") != std::string::npos);

  const auto truncated = text.substr(0, text.find(",fusion,"));
  CHECK(message(truncated.substr(0, truncated.rfind('\n') + 1)).find("no fusion row") != std::string::npos);
}

TEST_CASE("timing csv lists every prediction") {
  const auto log = run(testutil::short_linear(6.0));
  std::ostringstream os;
  write_timing_csv(os, log);
  std::size_t preds = 0;
  for (const auto& t : log.ticks) preds += t.predictions.size();
  const std::string text = os.str();
  CHECK(text.rfind("tick,agent,origin_tick,elapsed_s\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == preds + 1);
}

TEST_CASE("config text round trip") {
  for (const auto& base : {linear_scenario(), figure_eight_scenario()}) {
    const std::string text = config_to_text(base);
    const ScenarioConfig back = parse_config_text(text);
    CHECK(config_to_text(back) == text);
    CHECK(back.name == base.name);
    CHECK(back.target.kind == base.target.kind);
    CHECK(back.obstacles.obstacles.size() == base.obstacles.obstacles.size());
    CHECK(back.nominal_dt == base.nominal_dt);
  }
  auto cfg = linear_scenario();
  cfg.target.kind = TargetKind::kWaypoints;
  cfg.target.waypoints = {{1.5, -2.25, 5.0}, {1.0 / 3.0, 7.0, 6.0}};
  cfg.disabled_predictors = {1, 3};
  cfg.flocking.alignment = AlignmentMode::kVelocityMatch;
  cfg.track_mode = TrackMode::kLive;
  const auto back = parse_config_text(config_to_text(cfg));
  CHECK(back.target.waypoints == cfg.target.waypoints);
  CHECK(back.disabled_predictors == cfg.disabled_predictors);
  CHECK(back.flocking.alignment == AlignmentMode::kVelocityMatch);
  CHECK(back.track_mode == TrackMode::kLive);
}

TEST_CASE("config parsing rules") {
  const auto cfg = parse_config_text(
      "# comment line\n"
      "flocking.r_c = 0.7   # trailing comment\n"
      "scenario = figure8\n"
      "sim.seed = 12\n"
      "obstacle.0.x = 1\nobstacle.0.y = 2\nobstacle.1.x = -5\n");
  CHECK(cfg.name == "figure8");
  CHECK(cfg.flocking.r_c == 0.7);
  CHECK(cfg.seed == 12);
  REQUIRE(cfg.obstacles.obstacles.size() == 2);
  CHECK(cfg.obstacles.obstacles[0].center.x == 1.0);
  CHECK(cfg.obstacles.obstacles[1].center.x == -5.0);

  CHECK(error_of("flocking.r_q = 1\n").find("unknown config key 'flocking.r_q'") != std::string::npos);
  CHECK(error_of("sim.seed = abc\n").find("sim.seed") != std::string::npos);
  CHECK(error_of("sim.seed = 1\nsim.seed = 2\n").find("sim.seed") != std::string::npos);
  CHECK(error_of("obstacle.1.x = 3\n").find("obstacle") != std::string::npos);
  CHECK(error_of("flocking.r_c = -1\n").find("flocking") != std::string::npos);
  CHECK(error_of("no equals sign\n") != "");
  CHECK(error_of("scenario = spiral\n").find("scenario") != std::string::npos);
}

TEST_CASE("every known key appears in the emitted text") {
  const std::string text = "\n" + config_to_text(linear_scenario());
  for (const auto& key : known_config_keys()) {
    if (key.rfind("obstacle.N.", 0) == 0) continue;
    CHECK_MESSAGE(text.find("\n" + key + " = ") != std::string::npos, key);
  }
}

TEST_CASE("missing config file names the path") {
  try {
    load_config("/nonexistent/dir/x.cfg");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.cfg") != std::string::npos);
  }
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("compare tables") {
  const auto cfg = linear_scenario();
  const auto r = run_compare(cfg, CompareMode::kShort);
  REQUIRE(r.methods.size() == 3);
  for (const auto& m : r.methods) {
    CHECK(m.cycles == 90);
    CHECK(m.residuals.size() == 90);
    CHECK(std::isfinite(m.per_prediction_s));
    CHECK(m.per_prediction_s > 0.0);
  }
  std::stringstream timing, intervals;
  write_timing_table(timing, r);
  write_interval_table(intervals, r);
  CHECK(timing.str().rfind("method,predictions,cycles,mean_predict_s,effective_parallelism,per_prediction_s\n", 0) == 0);
  CHECK(intervals.str().rfind("method,axis,n,mean,ci_lo,ci_hi,half_width,p\n", 0) == 0);
  const auto trows = read_timing_table(timing);
  const auto irows = read_interval_table(intervals);
  REQUIRE(trows.size() == 3);
  REQUIRE(irows.size() == 6);
  CHECK(trows[0].method == "bfbel_single");
  CHECK(trows[1].method == "bfbel_multi");
  CHECK(trows[2].method == "cubic_fit");
  CHECK(trows[1].predictions == 360);
  for (const auto& row : irows) {
    CHECK(row.n == 90);
    CHECK(row.lo <= row.hi);
  }
  CHECK(irows[0].half_width == doctest::Approx(confidence_interval(r.methods[0].residuals.x).half_width()));
  std::stringstream bad("method,wrong\n");
  CHECK_THROWS_AS(read_timing_table(bad), InputError);
}

TEST_CASE("long compare mode runs 840 cycles") {
  CHECK(compare_cycles(CompareMode::kLong) == 840);
  const auto r = run_compare(linear_scenario(), CompareMode::kLong, 2, 2);
  for (const auto& m : r.methods) CHECK(m.cycles == 840);
}

TEST_CASE("svg output depends only on the data") {
  const auto log = run(testutil::short_linear(20.0));
  const auto a = standard_charts(log);
  const auto b = standard_charts(log);
  REQUIRE(a.size() == 10);
  CHECK(a == b);
  for (const auto& [name, svg] : a) {
    CHECK(name.size() > 4);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  CHECK_THROWS_AS(standard_charts(SimLog{}), InputError);

  Chart c;
  c.title = "a < b & c";
  const std::string svg = render_svg(c);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
}
