#include <doctest.h>

#include <cmath>
#include <vector>

#include "bfbelp/rng.hpp"
#include "bfbelp/vehicle.hpp"

using namespace bfbelp;

TEST_CASE("pid_step examples") {
  SUBCASE("proportional") {
    const auto out = pid_step({1.0, 0.0, 0.0}, {}, 2.0, 0.1);
    CHECK(out.control == 2.0);
  }
  SUBCASE("derivative of a constant error vanishes on the second step") {
    const PidGains g{0.0, 0.0, 0.4};
    const auto s1 = pid_step(g, {}, 1.5, 0.1);
    const auto s2 = pid_step(g, s1.state, 1.5, 0.1);
    CHECK(s2.control == 0.0);
  }
  SUBCASE("integral accumulates") {
    const PidGains g{0.0, 1.0, 0.0};
    PidState st;
    double u = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto out = pid_step(g, st, 1.0, 0.1);
      st = out.state;
      u = out.control;
    }
    CHECK(u == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("dt must be positive") { CHECK_THROWS_AS(pid_step({}, {}, 1.0, 0.0), InputError); }
}

TEST_CASE("pid output superposes on fresh states") {
  Rng rng(2);
  const PidGains g{1.5, 0.05, 0.3};
  for (int trial = 0; trial < 50; ++trial) {
    PidState sa, sb, sc;
    for (int k = 0; k < 20; ++k) {
      const double ea = rng.normal();
      const double eb = rng.normal();
      const double dt = rng.uniform(0.02, 0.05);
      const auto a = pid_step(g, sa, ea, dt);
      const auto b = pid_step(g, sb, eb, dt);
      const auto c = pid_step(g, sc, ea + eb, dt);
      CHECK(c.control == doctest::Approx(a.control + b.control).epsilon(1e-12).scale(1.0));
      sa = a.state;
      sb = b.state;
      sc = c.state;
    }
  }
}

TEST_CASE("integral stays inside the anti-windup clamp") {
  const PidGains g{1.5, 0.05, 0.3};
  const VehicleLimits lim;
  const double clamp = lim.integral_clamp(g);
  CHECK(clamp == doctest::Approx(10.0 * lim.v_max / g.ki));
  PidState st;
  for (int k = 0; k < 100000; ++k) {
    st = pid_step(g, st, 5.0, 0.05, clamp).state;
    REQUIRE(std::abs(st.integral) <= clamp);
  }
  CHECK(st.integral == clamp);
}

TEST_CASE("integrate_drone") {
  const PidGains g;
  const VehicleLimits lim;
  SUBCASE("matching command coasts") {
    DroneState s;
    s.velocity = {1.0, -0.5, 0.0};
    const auto n = integrate_drone(s, CommandVector{1.0, -0.5, 0.0}, 0.1, g, lim);
    CHECK(n.velocity == s.velocity);
    CHECK(n.position.x == doctest::Approx(0.1));
    CHECK(n.position.y == doctest::Approx(-0.05));
  }
  SUBCASE("rest is a fixed point") {
    DroneState s;
    s.position = {3.0, 4.0, 5.0};
    const auto n = integrate_drone(s, CommandVector{}, 1.0 / 30.0, g, lim);
    CHECK(n == s);
  }
  SUBCASE("step command approaches without overshooting the limit") {
    DroneState s;
    const CommandVector cmd{2.5, 0.0, 0.0};
    double prev = 0.0;
    for (int k = 0; k < 300; ++k) {
      s = integrate_drone(s, cmd, 1.0 / 30.0, g, lim);
      CHECK(s.velocity.x <= lim.v_max);
      if (k < 30) CHECK(s.velocity.x >= prev);
      prev = s.velocity.x;
    }
    CHECK(s.velocity.x == doctest::Approx(2.5).epsilon(0.02));
  }
  SUBCASE("velocity never exceeds the limit") {
    Rng rng(4);
    DroneState s;
    for (int k = 0; k < 2000; ++k) {
      const CommandVector cmd{rng.normal(0, 10), rng.normal(0, 10), rng.normal(0, 10)};
      s = integrate_drone(s, cmd, rng.uniform(0.03, 0.04), g, lim);
      for (std::size_t a = 0; a < kAxes; ++a) REQUIRE(std::abs(s.velocity[a]) <= lim.v_max);
    }
  }
}

TEST_CASE("jittered_dt") {
  Rng a(5), b(5);
  CHECK(jittered_dt(a, 1.0 / 30.0, 0.0) == 1.0 / 30.0);
  for (int k = 0; k < 10000; ++k) {
    const double dt = jittered_dt(a, 1.0 / 30.0, 0.05);
    CHECK(dt >= 0.031666);
    CHECK(dt <= 0.035);
  }
  Rng c(9), d(9);
  for (int k = 0; k < 100; ++k) CHECK(jittered_dt(c, 0.1, 0.05) == jittered_dt(d, 0.1, 0.05));
  CHECK_THROWS_AS(jittered_dt(b, 0.1, 1.0), ConfigError);
}

TEST_CASE("pid gain validation") {
  CHECK_THROWS_AS((PidGains{-1.0, 0.0, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS((PidGains{1.0, NAN, 0.0}).validate(), ConfigError);
  CHECK_NOTHROW(PidGains{}.validate());
}
