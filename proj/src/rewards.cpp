#include "multigait/rewards.hpp"

#include <cmath>

namespace multigait {

namespace {
double normPow(double norm, int exponent) {
  return exponent == 2 ? norm * norm : norm;
}
}  // namespace

double taskReward(const Eigen::Vector2d& v_cmd_xy, const Eigen::Vector2d& v_xy,
                  double w_cmd_z, double w_z, const RewardConfig& cfg) {
  const double ev = normPow((v_cmd_xy - v_xy).norm(), cfg.exponents.tracking_lin);
  const double ew = normPow(std::abs(w_cmd_z - w_z), cfg.exponents.tracking_ang);
  return cfg.weights.tracking_lin * std::exp(-ev / cfg.tracking_scale) +
         cfg.weights.tracking_ang * std::exp(-ew / cfg.tracking_scale);
}

double regularizationReward(const Eigen::VectorXd& joint_torques,
                            const Eigen::VectorXd& joint_acc,
                            const Eigen::VectorXd& joint_pos_prev,
                            const Eigen::VectorXd& joint_pos_now,
                            double base_height_cmd, double base_height,
                            int n_collisions, const RewardConfig& cfg) {
  const auto& w = cfg.weights;
  const auto& e = cfg.exponents;
  return -w.torque * normPow(joint_torques.norm(), e.torque) -
         w.joint_acc * normPow(joint_acc.norm(), e.joint_acc) -
         w.joint_motion *
             normPow((joint_pos_prev - joint_pos_now).norm(), e.joint_motion) -
         w.height * normPow(std::abs(base_height_cmd - base_height), e.height) -
         w.collision * n_collisions;
}

double contactReward(const ContactSchedule& schedule,
                     const std::array<Eigen::Vector3d, kNumLegs>& foot_forces,
                     const std::array<double, kNumLegs>& foot_xy_speeds,
                     const RewardConfig& cfg) {
  double r = 0.0;
  for (int i = 0; i < kNumLegs; ++i) {
    const double c = schedule.c_des[i];
    r -= (1.0 - c) * (1.0 - std::exp(-foot_forces[i].norm() / cfg.force_scale));
    r -= c * (1.0 - std::exp(-std::abs(foot_xy_speeds[i]) / cfg.foot_speed_scale));
  }
  return cfg.weights.contact * r;
}

double styleReward(double d_score, const RewardConfig& cfg) {
  const double d = d_score - 1.0;
  return cfg.weights.style * std::max(0.0, 1.0 - 0.25 * d * d);
}

RewardBreakdown totalReward(double task, double regularization, double style,
                            double contact, Group group) {
  RewardBreakdown r;
  r.task = task;
  r.regularization = regularization;
  if (group == Group::kCommon) {
    r.style = style;
    r.contact = contact;
  }
  r.total = r.task + r.regularization + r.style + r.contact;
  return r;
}

}  // namespace multigait
