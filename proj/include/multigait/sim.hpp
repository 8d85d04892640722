#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <random>

#include "multigait/gait.hpp"
#include "multigait/leg_kinematics.hpp"
#include "multigait/terrain.hpp"

namespace multigait {

// Trunk + four 3-DoF legs, Go1-class numbers. Legs are massless kinematic
// chains; contact forces reach the trunk directly and load the joints
// through the leg Jacobian transpose.
struct QuadrupedModel {
  LegGeometry leg;
  std::array<Eigen::Vector3d, kNumLegs> hip_offsets{
      Eigen::Vector3d(0.19, 0.049, 0.0),   // FL
      Eigen::Vector3d(0.19, -0.049, 0.0),  // FR
      Eigen::Vector3d(-0.19, 0.049, 0.0),  // RL
      Eigen::Vector3d(-0.19, -0.049, 0.0)  // RR
  };
  std::array<double, kNumLegs> side_signs{1.0, -1.0, 1.0, -1.0};
  double trunk_mass = 13.0;  // full robot mass lives in the trunk
  Eigen::Vector3d trunk_inertia{0.09, 0.17, 0.23};
  Eigen::Vector3d trunk_half_dims{0.19, 0.13, 0.057};
  Eigen::Vector3d nominal_leg_pose{0.0, 0.8, -1.5};  // abd, hip, knee
  Eigen::Vector3d q_lower{-0.86, -0.69, -2.82};
  Eigen::Vector3d q_upper{0.86, 4.50, -0.89};
  double tau_max = 23.7;       // [N m]
  double kp = 20.0, kd = 0.5;  // joint PD gains
  double joint_inertia = 0.025;  // reflected rotor+link inertia [kg m^2]

  Eigen::VectorXd nominalPose() const;  // 12
  // standing base height implied by the nominal pose
  double nominalHeight() const;
};

struct SimConfig {
  QuadrupedModel model;
  double control_dt = 0.02;
  int substeps = 8;  // 400 Hz inner integration
  double gravity = 9.81;
  double action_scale = 0.5;   // [rad] joint offset bound
  double contact_kn = 2e4;     // [N/m] normal spring
  double contact_dn = 200.0;   // [N s/m] normal damping
  double contact_kt = 5e3;     // [N/m] tangential anchor spring
  double contact_dt = 50.0;    // [N s/m] tangential damping
  double friction = 0.8;       // Coulomb coefficient when not randomized
  double episode_seconds = 20.0;
};

// Per-episode physical parameters drawn by the dynamics randomizer.
struct EpisodePhysics {
  double friction = 0.8;       // Coulomb coefficient in effect
  double added_mass = 0.0;     // [kg]
  double motor_scale = 1.0;    // multiplies available torque
  int obs_latency = 0;         // control steps
  double push_interval = 8.0;  // [s], <= 0 disables pushes
  double push_speed = 0.5;     // [m/s] max impulse magnitude
};

struct RandomizationProfile {
  bool enabled = true;
  std::array<double, 2> friction_range{0.4, 1.25};
  std::array<double, 2> added_mass_range{-1.0, 3.0};
  std::array<double, 2> motor_scale_range{0.9, 1.1};
  int max_latency = 1;  // latency sampled from {0..max}
  double push_interval = 8.0;
  double push_speed = 0.5;
};

EpisodePhysics applyRandomization(const RandomizationProfile& profile,
                                  std::mt19937_64& rng);

struct RobotState {
  Eigen::Vector3d base_pos{0, 0, 0.31};
  Eigen::Quaterniond base_quat{1, 0, 0, 0};  // world <- base
  Eigen::Vector3d base_lin_vel{0, 0, 0};     // world
  Eigen::Vector3d base_ang_vel{0, 0, 0};     // world
  Eigen::VectorXd q;           // 12 joint positions
  Eigen::VectorXd qd;          // 12 joint velocities
  Eigen::VectorXd tau;         // 12 applied torques
  Eigen::VectorXd prev_action;  // 12, last commanded offsets [rad]
  std::array<Eigen::Vector3d, kNumLegs> foot_pos;    // world
  std::array<Eigen::Vector3d, kNumLegs> foot_vel;    // world
  std::array<Eigen::Vector3d, kNumLegs> foot_force;  // world
  std::array<Eigen::Vector2d, kNumLegs> foot_anchor;
  std::array<bool, kNumLegs> foot_in_contact{false, false, false, false};
  Eigen::Vector3d ext_force{0, 0, 0};  // world, active this control step
  Eigen::Vector3d ext_point{0, 0, 0};  // world application point
  int collision_count = 0;             // non-foot contacts this step
  bool fault = false;
};

enum class Termination { kRunning, kTerminated, kTimeout };

class SimEnv {
 public:
  SimEnv(SimConfig config, TerrainField terrain, EpisodePhysics physics = {});

  // Places the robot at the spawn point in the nominal pose with optional
  // joint noise, and re-seeds the push schedule.
  void reset(std::mt19937_64& rng, double joint_noise = 0.03,
             const Eigen::Vector2d& spawn_xy = {0.0, 0.0});

  // One 50 Hz control step (several physics substeps). The action holds
  // joint offsets in radians, clamped to +-action_scale.
  void step(const Eigen::VectorXd& action);

  Eigen::VectorXd observePartial() const;     // 42
  Eigen::VectorXd observePrivileged() const;  // 21
  Eigen::VectorXd heightmapScan() const;      // 187

  Termination checkTermination(double elapsed_s) const;

  const RobotState& state() const { return state_; }
  RobotState& mutableState() { return state_; }
  const TerrainField& terrain() const { return terrain_; }
  void setTerrain(TerrainField terrain) { terrain_ = std::move(terrain); }
  const SimConfig& config() const { return config_; }
  const EpisodePhysics& physics() const { return physics_; }
  void setPhysics(const EpisodePhysics& physics) { physics_ = physics; }

  double baseHeightAboveTerrain() const;
  Eigen::Vector3d baseLinVelBody() const;
  std::array<double, kNumLegs> footXySpeeds() const;
  std::array<bool, kNumLegs> footContacts() const;
  // joint acceleration by finite differences across control steps
  const Eigen::VectorXd& jointAcceleration() const { return joint_acc_; }

  // Schedules a horizontal velocity impulse for the next control step.
  void queuePush(const Eigen::Vector2d& delta_v, const Eigen::Vector3d& point_body);
  double timeSinceLastPush() const { return time_since_push_; }

 private:
  void substep(double dt);
  void updateFeet();
  Eigen::Vector3d footWorld(int leg) const;
  int countCollisions() const;

  SimConfig config_;
  TerrainField terrain_;
  EpisodePhysics physics_;
  RobotState state_;
  Eigen::VectorXd q_des_;
  Eigen::VectorXd prev_qd_;
  Eigen::VectorXd joint_acc_;
  Eigen::Vector2d pending_push_{0, 0};
  Eigen::Vector3d pending_push_point_{0, 0, 0};
  bool push_pending_ = false;
  double time_since_push_ = 0.0;
};

}  // namespace multigait
