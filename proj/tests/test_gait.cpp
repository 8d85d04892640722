#include "multigait/gait.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle_normal_cdf.hpp"

using namespace multigait;

TEST_CASE("phase advance follows f*dt modulo 1") {
  CHECK(advancePhase({0.9}, 2.0, 0.02).phi1 == doctest::Approx(0.94).epsilon(1e-12));
  CHECK(advancePhase({0.99}, 2.0, 0.02).phi1 == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(advancePhase({0.3}, 0.0, 0.02).phi1 == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("phase advance rejects bad inputs") {
  CHECK_THROWS(advancePhase({0.0}, std::nan(""), 0.02));
  CHECK_THROWS(advancePhase({0.0}, 2.0, 0.0));
  CHECK_THROWS(advancePhase({0.0}, 2.0, -0.02));
  CHECK_THROWS(advancePhase({0.0}, -1.0, 0.02));
}

TEST_CASE("phase returns to start after whole cycles") {
  const double dt = 0.02;
  for (double f : {1.0, 2.0, 4.0}) {
    // smallest k with k*f*dt integer
    int k = 1;
    while (std::abs(k * f * dt - std::round(k * f * dt)) > 1e-12) ++k;
    PhaseState s{0.37};
    for (int i = 0; i < k; ++i) s = advancePhase(s, f, dt);
    CHECK(std::abs(s.phi1 - 0.37) < 1e-9);
  }
}

TEST_CASE("leg phases carry the configured offsets") {
  auto trot = legPhases({0.2}, {0.5, 0.5, 0.0});
  CHECK(trot[0] == doctest::Approx(0.2));
  CHECK(trot[1] == doctest::Approx(0.7));
  CHECK(trot[2] == doctest::Approx(0.7));
  CHECK(trot[3] == doctest::Approx(0.2));

  auto pronk = legPhases({0.0}, {0.0, 0.0, 0.0});
  for (double p : pronk) CHECK(p == doctest::Approx(0.0));

  auto walk = legPhases({0.9}, {0.5, 0.25, 0.75});
  CHECK(walk[0] == doctest::Approx(0.9));
  CHECK(walk[1] == doctest::Approx(0.4));
  CHECK(walk[2] == doctest::Approx(0.15));
  CHECK(walk[3] == doctest::Approx(0.65));
}

TEST_CASE("offsets are preserved while the phase advances") {
  const auto offsets = namedGait("walking").phase_offsets;
  PhaseState s{0.13};
  for (int step = 0; step < 500; ++step) {
    s = advancePhase(s, 3.1, 0.02);
    auto phases = legPhases(s, offsets);
    for (int i = 0; i < 3; ++i) {
      double diff = phases[i + 1] - phases[0];
      diff -= std::floor(diff);
      CHECK(std::abs(diff - offsets[i]) < 1e-9);
    }
  }
}

TEST_CASE("gait vector layout") {
  GaitParams params;
  params.phase_offsets = {0.5, 0.0, 0.5};  // pacing
  params.frequency_hz = 2.0;
  params.stance_ratio = 0.5;
  params.base_height_cmd = 0.3;

  auto quarter = encodeGaitVector({0.25}, params);
  CHECK(quarter[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quarter[1] == doctest::Approx(0.0).epsilon(1e-12));

  auto zero = encodeGaitVector({0.0}, params);
  CHECK(zero[0] == doctest::Approx(0.0));
  CHECK(zero[1] == doctest::Approx(1.0));
  CHECK(zero[2] == doctest::Approx(0.5));
  CHECK(zero[3] == doctest::Approx(0.0));
  CHECK(zero[4] == doctest::Approx(0.5));
  CHECK(zero[5] == doctest::Approx(2.0));
  CHECK(zero[6] == doctest::Approx(0.5));
  CHECK(zero[7] == doctest::Approx(0.3));
}

TEST_CASE("contact schedule matches the independent CDF oracle") {
  // worked points
  auto at = [](double phi, double stance) {
    return desiredContactSchedule({phi, phi, phi, phi}, stance, 0.05).c_des[0];
  };
  CHECK(std::abs(at(0.25, 0.5) - 1.0) < 1e-6);
  CHECK(at(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(at(0.75, 0.5) < 1e-5);

  // 1000-point grid against the series/continued-fraction oracle
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uphi(0.0, 1.0);
  std::uniform_real_distribution<double> ustance(0.05, 0.95);
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double phi = uphi(rng);
    const double stance = ustance(rng);
    const double got = at(phi, stance);
    const double want = oracle::contactScheduleValue(phi, stance, 0.05);
    max_err = std::max(max_err, std::abs(got - want));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("phase remap is continuous, monotone, and centered") {
  for (double stance : {0.25, 0.5, 0.75}) {
    CHECK(remapPhase(stance, stance) == doctest::Approx(0.5).epsilon(1e-15));
    // approach from above
    CHECK(remapPhase(stance + 1e-12, stance) == doctest::Approx(0.5).epsilon(1e-9));
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double p = remapPhase(i / 1000.0, stance);
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("stance fraction equals the measure where C exceeds one half") {
  for (double stance : {0.3, 0.5, 0.75}) {
    const int n = 200000;
    int above = 0;
    for (int i = 0; i < n; ++i) {
      const double phi = (i + 0.5) / n;
      if (desiredContactSchedule({phi, 0, 0, 0}, stance, 0.05).c_des[0] > 0.5) {
        ++above;
      }
    }
    CHECK(std::abs(static_cast<double>(above) / n - stance) < 0.01);
  }
}

TEST_CASE("schedule rejects bad stance ratio") {
  CHECK_THROWS(desiredContactSchedule({0.1, 0.1, 0.1, 0.1}, 0.0, 0.05));
  CHECK_THROWS(desiredContactSchedule({0.1, 0.1, 0.1, 0.1}, 1.0, 0.05));
  CHECK_THROWS(desiredContactSchedule({0.1, 0.1, 0.1, 0.1}, 0.5, 0.0));
}

TEST_CASE("named gaits follow the dataset definitions") {
  auto walking = namedGait("walking");
  CHECK(walking.phase_offsets == std::array<double, 3>{0.5, 0.25, 0.75});
  CHECK(walking.stance_ratio == doctest::Approx(0.75));

  auto bounding = namedGait("bounding");
  CHECK(bounding.phase_offsets == std::array<double, 3>{0.0, 0.5, 0.5});
  CHECK(bounding.stance_ratio == doctest::Approx(0.5));

  CHECK(namedGait("trotting").phase_offsets == std::array<double, 3>{0.5, 0.5, 0.0});
  CHECK(namedGait("pacing").phase_offsets == std::array<double, 3>{0.5, 0.0, 0.5});
  CHECK(namedGait("pronking").phase_offsets == std::array<double, 3>{0.0, 0.0, 0.0});

  CHECK_THROWS(namedGait("gallop"));
}
