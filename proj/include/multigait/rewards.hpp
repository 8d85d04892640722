#pragma once

#include <Eigen/Dense>
#include <array>

#include "multigait/gait.hpp"

namespace multigait {

enum class Group { kCommon, kAdaptive };

// Per-step reward split into the four summed components.
struct RewardBreakdown {
  double task = 0.0;            // r^g
  double regularization = 0.0;  // r^l
  double style = 0.0;           // r^s, already weighted, in [0, 0.5]
  double contact = 0.0;         // r^c, <= 0
  double total = 0.0;
};

// Term weights; defaults follow the reward table used in training.
struct RewardWeights {
  double tracking_lin = 1.0;
  double tracking_ang = 0.5;
  double torque = 1e-4;
  double joint_acc = 2.5e-7;
  double joint_motion = 0.1;
  double height = 1.0;
  double collision = 0.1;
  double style = 0.5;
  double contact = 1.0;
};

// Norm exponents (1 = literal Euclidean norm, 2 = squared). Kept per term
// because squared norms are a common variant of the same table.
struct RewardExponents {
  int tracking_lin = 1;
  int tracking_ang = 1;
  int torque = 1;
  int joint_acc = 1;
  int joint_motion = 1;
  int height = 1;
};

struct RewardConfig {
  RewardWeights weights;
  RewardExponents exponents;
  double tracking_scale = 0.15;  // divisor inside the tracking exponentials
  double force_scale = 50.0;     // [N] contact-force saturation
  double foot_speed_scale = 1.25;  // [m/s] swing-speed saturation
};

// Velocity tracking: w_v * exp(-|dv|/s) + w_w * exp(-|dw|/s).
double taskReward(const Eigen::Vector2d& v_cmd_xy, const Eigen::Vector2d& v_xy,
                  double w_cmd_z, double w_z, const RewardConfig& cfg = {});

// Penalty block: torque, joint acceleration, joint motion, height tracking,
// collisions. Always <= 0.
double regularizationReward(const Eigen::VectorXd& joint_torques,
                            const Eigen::VectorXd& joint_acc,
                            const Eigen::VectorXd& joint_pos_prev,
                            const Eigen::VectorXd& joint_pos_now,
                            double base_height_cmd, double base_height,
                            int n_collisions, const RewardConfig& cfg = {});

// Schedule-weighted penalties on loaded swing feet and sliding stance feet.
double contactReward(const ContactSchedule& schedule,
                     const std::array<Eigen::Vector3d, kNumLegs>& foot_forces,
                     const std::array<double, kNumLegs>& foot_xy_speeds,
                     const RewardConfig& cfg = {});

// Weighted style reward from a discriminator score: w_s * max(0, 1 - 0.25 (d-1)^2).
double styleReward(double d_score, const RewardConfig& cfg = {});

// Sums the four parts; the adaptive group receives neither style nor contact.
RewardBreakdown totalReward(double task, double regularization, double style,
                            double contact, Group group);

}  // namespace multigait
