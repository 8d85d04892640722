#include "multigait/sim.hpp"

#include <random>

#include "doctest.h"
#include "multigait/nets.hpp"

using namespace multigait;

namespace {

TerrainField flatTerrain() {
  return generateTerrain(TerrainType::kRoughFlat, 0, 1);
}

SimEnv makeEnv() {
  SimConfig cfg;
  return SimEnv(cfg, flatTerrain());
}

}  // namespace

TEST_CASE("airborne trunk follows the integrator's ballistic closed form") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(1);
  env.reset(rng, 0.0);
  env.mutableState().base_pos.z() = 2.0;  // clear of the ground
  env.mutableState().base_lin_vel = Eigen::Vector3d(0.3, -0.2, 0.1);
  const Eigen::Vector3d p0 = env.mutableState().base_pos;
  const Eigen::Vector3d v0 = env.mutableState().base_lin_vel;

  const Eigen::VectorXd zero_action = Eigen::VectorXd::Zero(12);
  const int control_steps = 5;  // 0.1 s
  for (int i = 0; i < control_steps; ++i) env.step(zero_action);

  const double dt = env.config().control_dt / env.config().substeps;
  const int k = control_steps * env.config().substeps;
  Eigen::Vector3d expected = p0 + v0 * (k * dt);
  expected.z() -= env.config().gravity * dt * dt * (k * (k + 1.0) / 2.0);
  CHECK((env.state().base_pos - expected).norm() < 1e-6);
  // feet never touched: no contact forces
  for (int leg = 0; leg < 4; ++leg) {
    CHECK(env.state().foot_force[leg].norm() == 0.0);
  }
}

TEST_CASE("static stance balances gravity within five percent") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(2);
  env.reset(rng, 0.0);
  const Eigen::VectorXd zero_action = Eigen::VectorXd::Zero(12);
  for (int i = 0; i < 100; ++i) env.step(zero_action);  // settle 2 s

  double total_normal = 0.0;
  for (int leg = 0; leg < 4; ++leg) {
    total_normal += env.state().foot_force[leg].z();
    CHECK(env.state().foot_force[leg].z() >= 0.0);
  }
  const double weight = env.config().model.trunk_mass * env.config().gravity;
  CHECK(std::abs(total_normal - weight) / weight < 0.05);
  CHECK(env.checkTermination(2.0) == Termination::kRunning);
}

TEST_CASE("joints settle to the commanded pose in half a second") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(3);
  env.reset(rng, 0.0);
  // airborne so the legs swing freely
  env.mutableState().base_pos.z() = 5.0;
  env.mutableState().q.array() += 0.2;
  const Eigen::VectorXd zero_action = Eigen::VectorXd::Zero(12);
  for (int i = 0; i < 25; ++i) env.step(zero_action);
  const Eigen::VectorXd err = env.state().q - env.config().model.nominalPose();
  CHECK(err.cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("contact forces obey the friction cone") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(4);
  env.reset(rng, 0.0);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::VectorXd action(12);
  for (int i = 0; i < 150; ++i) {
    for (int j = 0; j < 12; ++j) action[j] = u(rng);
    env.step(action);
    for (int leg = 0; leg < 4; ++leg) {
      const Eigen::Vector3d& f = env.state().foot_force[leg];
      CHECK(f.z() >= 0.0);
      CHECK(f.head<2>().norm() <= env.physics().friction * f.z() + 1e-9);
    }
  }
}

TEST_CASE("observations have the documented layout") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(5);
  env.reset(rng, 0.0);

  Eigen::VectorXd partial = env.observePartial();
  CHECK(partial.size() == 42);
  CHECK((partial.segment<3>(0) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-12);
  CHECK(std::abs(partial.segment<3>(0).norm() - 1.0) < 1e-12);

  // 90 degree roll: gravity reads along -y in the base frame
  env.mutableState().base_quat =
      Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitX()));
  partial = env.observePartial();
  CHECK((partial.segment<3>(0) - Eigen::Vector3d(0, -1, 0)).norm() < 1e-9);

  env.mutableState().base_quat = Eigen::Quaterniond::Identity();
  Eigen::VectorXd priv = env.observePrivileged();
  CHECK(priv.size() == 21);
  // no active push: external force block is zero
  CHECK(priv.segment<3>(15).norm() == 0.0);

  // airborne: the twelve contact-force entries vanish
  env.mutableState().base_pos.z() = 5.0;
  env.step(Eigen::VectorXd::Zero(12));
  priv = env.observePrivileged();
  CHECK(priv.segment<12>(3).norm() == 0.0);
}

TEST_CASE("heightmap scan is relative and yaw-anchored") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(6);
  env.reset(rng, 0.0);
  env.mutableState().base_pos.z() = 0.3;
  Eigen::VectorXd scan = env.heightmapScan();
  CHECK(scan.size() == 187);
  for (int i = 0; i < scan.size(); ++i) {
    CHECK(scan[i] == doctest::Approx(-0.3).epsilon(1e-9));
  }

  // translating robot and terrain together leaves the scan unchanged
  auto rough = generateTerrain(TerrainType::kRoughFlat, 9, 17);
  SimConfig cfg;
  SimEnv a(cfg, rough);
  std::mt19937_64 r2(7);
  a.reset(r2, 0.0);
  const Eigen::VectorXd scan_a = a.heightmapScan();

  TerrainField shifted = rough;
  shifted.origin_x += 1.7;
  shifted.origin_y -= 0.9;
  SimEnv b(cfg, shifted);
  std::mt19937_64 r3(7);
  b.reset(r3, 0.0);
  b.mutableState().base_pos.x() += 1.7;
  b.mutableState().base_pos.y() -= 0.9;
  const Eigen::VectorXd scan_b = b.heightmapScan();
  CHECK((scan_a - scan_b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("termination distinguishes falls from timeouts") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(8);
  env.reset(rng, 0.0);
  CHECK(env.checkTermination(5.0) == Termination::kRunning);
  CHECK(env.checkTermination(20.0) == Termination::kTimeout);

  env.mutableState().base_pos.z() = 0.02;  // trunk into the ground
  CHECK(env.checkTermination(5.0) == Termination::kTerminated);
}

TEST_CASE("randomization draws stay in range and are reproducible") {
  RandomizationProfile profile;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    EpisodePhysics p = applyRandomization(profile, rng);
    CHECK(p.friction >= profile.friction_range[0]);
    CHECK(p.friction <= profile.friction_range[1]);
    CHECK(p.added_mass >= profile.added_mass_range[0]);
    CHECK(p.added_mass <= profile.added_mass_range[1]);
    CHECK(p.motor_scale >= profile.motor_scale_range[0]);
    CHECK(p.motor_scale <= profile.motor_scale_range[1]);
    CHECK(p.obs_latency >= 0);
    CHECK(p.obs_latency <= profile.max_latency);
  }

  std::mt19937_64 r1(33), r2(33);
  for (int i = 0; i < 100; ++i) {
    EpisodePhysics a = applyRandomization(profile, r1);
    EpisodePhysics b = applyRandomization(profile, r2);
    CHECK(a.friction == b.friction);
    CHECK(a.added_mass == b.added_mass);
    CHECK(a.motor_scale == b.motor_scale);
    CHECK(a.obs_latency == b.obs_latency);
  }

  RandomizationProfile off;
  off.enabled = false;
  EpisodePhysics d = applyRandomization(off, rng);
  CHECK(d.friction == 0.8);
  CHECK(d.added_mass == 0.0);
  CHECK(d.motor_scale == 1.0);
}

TEST_CASE("identical seeds and actions give bit-identical trajectories") {
  auto run = [](std::uint64_t seed) {
    SimEnv env = makeEnv();
    std::mt19937_64 rng(seed);
    env.reset(rng, 0.03);
    std::mt19937_64 act_rng(seed + 1);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Eigen::VectorXd action(12);
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 12; ++j) action[j] = u(act_rng);
      env.step(action);
    }
    return env.state();
  };
  const RobotState a = run(42);
  const RobotState b = run(42);
  CHECK((a.base_pos - b.base_pos).norm() == 0.0);
  CHECK((a.q - b.q).norm() == 0.0);
  CHECK((a.qd - b.qd).norm() == 0.0);
  CHECK(a.base_quat.coeffs() == b.base_quat.coeffs());
}

TEST_CASE("quaternion stays normalized under sustained rotation") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(10);
  env.reset(rng, 0.0);
  env.mutableState().base_pos.z() = 10.0;
  env.mutableState().base_ang_vel = Eigen::Vector3d(1.0, 2.0, -1.5);
  for (int i = 0; i < 200; ++i) env.step(Eigen::VectorXd::Zero(12));
  CHECK(std::abs(env.state().base_quat.norm() - 1.0) < 1e-9);
}

TEST_CASE("pushes register as external wrenches and change velocity") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(11);
  env.reset(rng, 0.0);
  for (int i = 0; i < 50; ++i) env.step(Eigen::VectorXd::Zero(12));
  const Eigen::Vector3d v_before = env.state().base_lin_vel;

  env.queuePush(Eigen::Vector2d(0.4, 0.0), Eigen::Vector3d(0.0, 0.0, 0.05));
  env.step(Eigen::VectorXd::Zero(12));
  CHECK(env.observePrivileged().segment<3>(15).norm() > 0.0);
  const double dvx = env.state().base_lin_vel.x() - v_before.x();
  CHECK(dvx > 0.25);  // friction eats a little of the 0.4 impulse
  env.step(Eigen::VectorXd::Zero(12));
  CHECK(env.observePrivileged().segment<3>(15).norm() == 0.0);
}

TEST_CASE("non-finite actions fault the episode") {
  SimEnv env = makeEnv();
  std::mt19937_64 rng(12);
  env.reset(rng, 0.0);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(12);
  bad[3] = std::nan("");
  env.step(bad);
  CHECK(env.state().fault);
  CHECK(env.checkTermination(1.0) == Termination::kTerminated);
}
