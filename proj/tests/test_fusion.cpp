#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bfbelp/analytics.hpp"
#include "bfbelp/fusion.hpp"
#include "bfbelp/rng.hpp"
#include "test_util.hpp"

using namespace bfbelp;
using testutil::constant_prediction;

namespace {

PredictionPool pool_of(const std::vector<double>& values, long cycle = 0) {
  PredictionPool pool(cycle);
  for (std::size_t i = 0; i < values.size(); ++i) pool.add(constant_prediction(static_cast<int>(i), values[i]));
  return pool;
}

double sample_sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Prediction noisy_prediction(int agent, Rng& rng, long origin = 0, std::size_t n = 8) {
  Prediction p;
  p.agent_id = agent;
  p.origin_tick = origin;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(origin + static_cast<long>(k) + 1);
    p.future.push_back({t, {t + rng.normal(), 2.0 * t + rng.normal(), 5.0 + rng.normal()}});
  }
  return p;
}

}  // namespace

TEST_CASE("pool accepts one entry per agent") {
  PredictionPool pool(3);
  pool.add(constant_prediction(1, 0.0));
  CHECK_THROWS_AS(pool.add(constant_prediction(1, 2.0)), InputError);
  CHECK(pool.size() == 1);
  CHECK(pool.cycle_index() == 3);
}

TEST_CASE("outlier filter") {
  const FusionConfig cfg;
  SUBCASE("identical agents") {
    const auto split = filter_outliers(pool_of(std::vector<double>(6, 4.0)), cfg);
    CHECK(split.retained.size() == 6);
    CHECK(split.rejected.empty());
  }
  SUBCASE("nine agents at 10 and one at 100") {
    std::vector<double> v(9, 10.0);
    v.push_back(100.0);
    const double sd = sample_sd(v);
    CHECK(sd == doctest::Approx(28.46).epsilon(1e-3));
    CHECK(std::abs(100.0 - 19.0) > 2.0 * sd);
    const auto split = filter_outliers(pool_of(v), cfg);
    CHECK(split.rejected == std::vector<int>{9});
    CHECK(split.retained.size() == 9);
  }
  SUBCASE("eight at 10 and two agreeing at 100") {
    std::vector<double> v(8, 10.0);
    v.push_back(100.0);
    v.push_back(100.3);
    const auto split = filter_outliers(pool_of(v), cfg);
    CHECK(split.rejected.empty());
    CHECK(split.retained.size() == 10);
  }
  SUBCASE("agreement exception rescues a flagged pair") {
    // Eighteen at 10 push the pair at 100 beyond 2 sigma; they agree within 1 m.
    std::vector<double> v(18, 10.0);
    v.push_back(100.0);
    v.push_back(100.4);
    CHECK(std::abs(100.0 - 19.0) > 2.0 * sample_sd(v));
    const auto kept = filter_outliers(pool_of(v), cfg);
    CHECK(kept.rejected.empty());

    std::vector<double> apart(18, 10.0);
    apart.push_back(100.0);
    apart.push_back(103.0);
    const auto split = filter_outliers(pool_of(apart), cfg);
    CHECK(split.rejected == std::vector<int>{18, 19});
  }
  SUBCASE("two agents are never split") {
    const auto split = filter_outliers(pool_of({0.0, 1000.0}), cfg);
    CHECK(split.rejected.empty());
  }
  SUBCASE("far below the mean is rejected too") {
    std::vector<double> v(9, 10.0);
    v.push_back(-80.0);
    CHECK(filter_outliers(pool_of(v), cfg).rejected == std::vector<int>{9});
  }
  SUBCASE("empty pool") { CHECK_THROWS_AS(filter_outliers(PredictionPool{}, cfg), InputError); }
}

TEST_CASE("rolling average") {
  const std::vector<double> h{1.0, 2.0, 3.0};
  CHECK(rolling_average(h, 3) == 2.0);
  CHECK(rolling_average(h, 1) == 3.0);
  const std::vector<double> one{4.0};
  CHECK(rolling_average(one, 3) == 4.0);
  const std::vector<double> five{10.0, 1.0, 2.0, 3.0, 6.0};
  CHECK(rolling_average(five, 3) == doctest::Approx(11.0 / 3.0));
  const std::vector<double> none;
  CHECK_THROWS_AS(rolling_average(none, 3), InputError);
}

TEST_CASE("fuse_cycle with one or identical agents") {
  const FusionConfig cfg;
  Rng rng(1);
  const Prediction p = noisy_prediction(2, rng);
  {
    FusionHistory hist;
    PredictionPool pool(0);
    pool.add(p);
    const auto f = fuse_cycle(pool, hist, cfg);
    REQUIRE(f);
    REQUIRE(f->future.size() == p.future.size());
    for (std::size_t k = 0; k < p.future.size(); ++k) CHECK(f->future[k].position == p.future[k].position);
    CHECK(f->contributing_agents == std::vector<int>{2});
    CHECK_FALSE(f->stale);
  }
  {
    FusionHistory hist;
    PredictionPool pool(0);
    for (int a = 0; a < 4; ++a) {
      Prediction q = p;
      q.agent_id = a;
      pool.add(q);
    }
    const auto f = fuse_cycle(pool, hist, cfg);
    REQUIRE(f);
    for (std::size_t k = 0; k < p.future.size(); ++k) {
      for (std::size_t a = 0; a < kAxes; ++a) {
        CHECK(f->future[k].position[a] == doctest::Approx(p.future[k].position[a]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("fuse_cycle with an empty pool") {
  const FusionConfig cfg;
  FusionHistory hist;
  CHECK_FALSE(fuse_cycle(PredictionPool(0), hist, cfg).has_value());
  PredictionPool pool(1);
  pool.add(constant_prediction(0, 3.0));
  const auto first = fuse_cycle(pool, hist, cfg);
  REQUIRE(first);
  const auto again = fuse_cycle(PredictionPool(2), hist, cfg);
  REQUIRE(again);
  CHECK(again->stale);
  CHECK(again->future == first->future);
}

TEST_CASE("fused output does not depend on arrival order") {
  const FusionConfig cfg;
  Rng rng(12);
  std::vector<Prediction> preds;
  for (int a = 0; a < 5; ++a) preds.push_back(noisy_prediction(a, rng));
  std::vector<int> order{0, 1, 2, 3, 4};
  FusionHistory h0;
  PredictionPool base(0);
  for (const auto& p : preds) base.add(p);
  const auto ref = fuse_cycle(base, h0, cfg);
  for (int trial = 0; trial < 20; ++trial) {
    std::next_permutation(order.begin(), order.end());
    FusionHistory h;
    PredictionPool pool(0);
    for (int i : order) pool.add(preds[static_cast<std::size_t>(i)]);
    const auto f = fuse_cycle(pool, h, cfg);
    CHECK(f->future == ref->future);
  }
}

TEST_CASE("removing a rejected agent leaves the fused value unchanged") {
  const FusionConfig cfg;
  std::vector<double> v(9, 10.0);
  v.push_back(100.0);
  FusionHistory h1, h2;
  const auto with = fuse_cycle(pool_of(v), h1, cfg);
  REQUIRE(with->rejected_agents == std::vector<int>{9});
  v.pop_back();
  const auto without = fuse_cycle(pool_of(v), h2, cfg);
  CHECK(with->future == without->future);
}

TEST_CASE("identical cycles converge within N cycles") {
  FusionConfig cfg;
  cfg.window_n = 3;
  FusionHistory hist;
  PredictionPool first(0);
  first.add(constant_prediction(0, 20.0, 20, 0));
  fuse_cycle(first, hist, cfg);
  for (long c = 1; c <= 3; ++c) {
    PredictionPool pool(c);
    pool.add(constant_prediction(0, 7.25, 20, c));
    const auto f = fuse_cycle(pool, hist, cfg);
    if (c == 3) {
      for (const auto& s : f->future) CHECK(s.position == Vec3{7.25, 7.25, 7.25});
    }
  }
}

TEST_CASE("fused samples stay within the retained agents' range") {
  const FusionConfig cfg;
  Rng rng(99);
  FusionHistory hist;
  for (long c = 0; c < 20; ++c) {
    PredictionPool pool(c);
    for (int a = 0; a < 4; ++a) pool.add(noisy_prediction(a, rng, c * 3));
    const auto f = fuse_cycle(pool, hist, cfg);
    REQUIRE(f);
    CHECK_FALSE(f->contributing_agents.empty());
    if (c == 0) {
      for (std::size_t k = 0; k < f->future.size(); ++k) {
        for (std::size_t ax = 0; ax < kAxes; ++ax) {
          double lo = INFINITY, hi = -INFINITY;
          for (int a : f->contributing_agents) {
            const double v = pool.entries().at(a).future[k].position[ax];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
          CHECK(f->future[k].position[ax] >= lo);
          CHECK(f->future[k].position[ax] <= hi);
        }
      }
    }
  }
}

TEST_CASE("sample_at interpolates and continues the last segment") {
  FusedPrediction f;
  f.future = {{1.0, {0, 0, 0}}, {2.0, {2, 4, 6}}, {3.0, {4, 8, 12}}};
  CHECK(f.sample_at(1.5) == Vec3{1, 2, 3});
  CHECK(f.sample_at(4.0) == Vec3{6, 12, 18});
}

TEST_CASE("fused forecast beats every single agent on the linear scenario") {
  auto cfg = bfbelp::linear_scenario();
  cfg.seed = 4;
  cfg.duration = 60.0;
  const SimLog log = run(cfg);

  std::vector<double> agent_sq(cfg.drone_count, 0.0);
  std::vector<std::size_t> agent_n(cfg.drone_count, 0);
  for (const auto& t : log.ticks) {
    for (const auto& p : t.predictions) {
      if (p.lead_tick >= static_cast<long>(log.ticks.size())) continue;
      const Vec3 truth = log.ticks[static_cast<std::size_t>(p.lead_tick)].target;
      const Vec3 d = p.lead_position - truth;
      agent_sq[static_cast<std::size_t>(p.agent)] += d.x * d.x + d.y * d.y;
      agent_n[static_cast<std::size_t>(p.agent)] += 1;
    }
  }
  const ResidualSeries fused = fused_residuals(log);
  REQUIRE(fused.size() > 50);
  double fused_sq = 0.0;
  for (std::size_t k = 0; k < fused.size(); ++k) fused_sq += fused.x[k] * fused.x[k] + fused.y[k] * fused.y[k];
  const double fused_mse = fused_sq / static_cast<double>(fused.size());
  double best_agent = INFINITY;
  for (std::size_t a = 0; a < cfg.drone_count; ++a) {
    REQUIRE(agent_n[a] > 0);
    best_agent = std::min(best_agent, agent_sq[a] / static_cast<double>(agent_n[a]));
  }
  CHECK(fused_mse <= best_agent);
}
