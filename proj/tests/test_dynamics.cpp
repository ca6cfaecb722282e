#include <doctest.h>

#include <cmath>

#include "necrotic/dynamics.hpp"
#include "necrotic/radial.hpp"

using namespace necrotic;

namespace {

const ModelParams kSet1 = validate({0.5, 1.0, 0.25, 1.0});
const ModelParams kSet2 = validate({0.3, 2.0, 0.3, 1.0});

}  // namespace

TEST_CASE("stationary radius is a fixed point") {
  const StationaryState s = solve_Rs(kSet1);
  const Trajectory t = integrate(s.R_s, 50.0, kSet1);
  CHECK((t.radii.array() - s.R_s).abs().maxCoeff() < 1e-12);
}

TEST_CASE("trajectory layout") {
  StepControl c;
  c.samples = 33;
  const Trajectory t = integrate(1.0, 10.0, kSet1, c);
  CHECK(t.times.size() == 33);
  CHECK(t.times(0) == 0.0);
  CHECK(t.times(32) == 10.0);
  CHECK(t.radii(0) == 1.0);
  CHECK(t.core_radii.size() == 33);
  CHECK(t.accepted_steps > 0);
}

TEST_CASE("forward then backward returns to the start") {
  const Trajectory fwd = integrate(3.0, 8.0, kSet1);
  const double R_end = fwd.radii(fwd.radii.size() - 1);
  const Trajectory back = integrate(R_end, -8.0, kSet1);
  CHECK(back.radii(back.radii.size() - 1) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("monotone approach without overshoot, core onset recorded") {
  for (const ModelParams& p : {kSet1, kSet2}) {
    const StationaryState s = solve_Rs(p);
    const Trajectory up = integrate(0.5 * s.R_s, 200.0, p);
    const Trajectory down = integrate(2.0 * s.R_s, 200.0, p);
    for (Eigen::Index i = 1; i < up.radii.size(); ++i) {
      CHECK(up.radii(i) >= up.radii(i - 1));
      CHECK(up.radii(i) <= s.R_s);
      CHECK(down.radii(i) <= down.radii(i - 1));
      CHECK(down.radii(i) >= s.R_s);
    }
    // Both starts already carry a core.
    CHECK(up.onset_time == 0.0);
    CHECK(down.onset_time == 0.0);
    const Trajectory early = integrate(0.5 * s.r_star, 200.0, p);
    REQUIRE(early.onset_time.has_value());
    for (Eigen::Index i = 0; i < early.times.size(); ++i) {
      if (early.times(i) < *early.onset_time - 1e-9) CHECK(early.core_radii(i) == 0.0);
      if (early.times(i) > *early.onset_time + 1e-9) CHECK(early.core_radii(i) > 0.0);
    }
  }
}

TEST_CASE("onset times from R*/2") {
  CHECK_FALSE(integrate(1.0, 0.5, kSet1).onset_time.has_value());
  const Trajectory t1 = integrate(0.5 * solve_Rstar(kSet1), 20.0, kSet1);
  REQUIRE(t1.onset_time.has_value());
  CHECK(*t1.onset_time == doctest::Approx(5.773).epsilon(1e-3));
  const Trajectory t2 = integrate(0.5 * solve_Rstar(kSet2), 20.0, kSet2);
  REQUIRE(t2.onset_time.has_value());
  CHECK(*t2.onset_time == doctest::Approx(2.182).epsilon(1e-3));
}

TEST_CASE("distance to R_s at t = 200 matches the exact solution") {
  // Reference gaps from a 30-digit integration of the same ODE.
  const StationaryState s = solve_Rs(kSet1);
  const Trajectory up = integrate(0.5 * s.R_s, 200.0, kSet1);
  const Trajectory down = integrate(2.0 * s.R_s, 200.0, kSet1);
  const Eigen::Index last = up.radii.size() - 1;
  CHECK(std::abs(std::abs(up.radii(last) - s.R_s) - 1.28791009377922e-6) < 1e-9);
  CHECK(std::abs(std::abs(down.radii(last) - s.R_s) - 2.13225793345485e-6) < 1e-9);
}
