#include "multigait/sim.hpp"

#include <cmath>

#include "multigait/nets.hpp"

namespace multigait {

Eigen::VectorXd QuadrupedModel::nominalPose() const {
  Eigen::VectorXd q(12);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    q.segment<3>(3 * leg) = nominal_leg_pose;
  }
  return q;
}

double QuadrupedModel::nominalHeight() const {
  return -legForward(leg, 1.0, nominal_leg_pose).z();
}

EpisodePhysics applyRandomization(const RandomizationProfile& profile,
                                  std::mt19937_64& rng) {
  EpisodePhysics p;
  if (!profile.enabled) return p;
  auto draw = [&rng](const std::array<double, 2>& range) {
    std::uniform_real_distribution<double> dist(range[0], range[1]);
    return dist(rng);
  };
  p.friction = draw(profile.friction_range);
  p.added_mass = draw(profile.added_mass_range);
  p.motor_scale = draw(profile.motor_scale_range);
  std::uniform_int_distribution<int> lat(0, profile.max_latency);
  p.obs_latency = lat(rng);
  p.push_interval = profile.push_interval;
  p.push_speed = profile.push_speed;
  return p;
}

SimEnv::SimEnv(SimConfig config, TerrainField terrain, EpisodePhysics physics)
    : config_(std::move(config)),
      terrain_(std::move(terrain)),
      physics_(physics) {
  state_.q = config_.model.nominalPose();
  state_.qd = Eigen::VectorXd::Zero(12);
  state_.tau = Eigen::VectorXd::Zero(12);
  state_.prev_action = Eigen::VectorXd::Zero(12);
  q_des_ = state_.q;
  prev_qd_ = state_.qd;
  joint_acc_ = Eigen::VectorXd::Zero(12);
  updateFeet();
}

void SimEnv::reset(std::mt19937_64& rng, double joint_noise,
                   const Eigen::Vector2d& spawn_xy) {
  std::uniform_real_distribution<double> noise(-joint_noise, joint_noise);
  state_.q = config_.model.nominalPose();
  for (int i = 0; i < 12; ++i) state_.q[i] += noise(rng);
  state_.qd.setZero();
  state_.tau.setZero();
  state_.prev_action.setZero();
  state_.base_quat = Eigen::Quaterniond::Identity();
  state_.base_lin_vel.setZero();
  state_.base_ang_vel.setZero();

  // drop the lowest foot exactly onto the terrain
  double lowest = 0.0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Eigen::Vector3d rel =
        config_.model.hip_offsets[leg] +
        legForward(config_.model.leg, config_.model.side_signs[leg],
                   state_.q.segment<3>(3 * leg));
    lowest = std::min(lowest, rel.z());
  }
  const double ground = terrain_.heightAt(spawn_xy.x(), spawn_xy.y());
  state_.base_pos << spawn_xy.x(), spawn_xy.y(), ground - lowest + 0.001;

  state_.ext_force.setZero();
  state_.ext_point.setZero();
  state_.collision_count = 0;
  state_.fault = false;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    state_.foot_force[leg].setZero();
    state_.foot_in_contact[leg] = false;
  }
  q_des_ = state_.q;
  prev_qd_ = state_.qd;
  joint_acc_.setZero();
  push_pending_ = false;
  pending_push_.setZero();
  time_since_push_ = 0.0;
  updateFeet();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    state_.foot_anchor[leg] = state_.foot_pos[leg].head<2>();
  }
}

void SimEnv::queuePush(const Eigen::Vector2d& delta_v,
                       const Eigen::Vector3d& point_body) {
  pending_push_ = delta_v;
  pending_push_point_ = point_body;
  push_pending_ = true;
}

void SimEnv::step(const Eigen::VectorXd& action) {
  if (state_.fault) return;
  if (action.size() != 12 || !action.allFinite()) {
    state_.fault = true;
    return;
  }

  const double scale = config_.action_scale;
  const Eigen::VectorXd clamped = action.cwiseMax(-scale).cwiseMin(scale);
  q_des_ = config_.model.nominalPose() + clamped;
  state_.prev_action = action;

  // pending push acts as an external wrench over exactly one control step
  if (push_pending_) {
    const double mass = config_.model.trunk_mass + physics_.added_mass;
    state_.ext_force =
        Eigen::Vector3d(pending_push_.x(), pending_push_.y(), 0.0) * mass /
        config_.control_dt;
    state_.ext_point =
        state_.base_pos + state_.base_quat * pending_push_point_;
    push_pending_ = false;
    time_since_push_ = 0.0;
  } else {
    state_.ext_force.setZero();
    state_.ext_point = state_.base_pos;
    time_since_push_ += config_.control_dt;
  }

  const double dt = config_.control_dt / config_.substeps;
  for (int s = 0; s < config_.substeps; ++s) substep(dt);
  updateFeet();

  joint_acc_ = (state_.qd - prev_qd_) / config_.control_dt;
  prev_qd_ = state_.qd;
  state_.collision_count = countCollisions();

  if (!state_.base_pos.allFinite() || !state_.base_lin_vel.allFinite() ||
      !state_.q.allFinite() || !state_.qd.allFinite()) {
    state_.fault = true;
  }
}

void SimEnv::substep(double dt) {
  const QuadrupedModel& m = config_.model;
  const Eigen::Matrix3d rot = state_.base_quat.toRotationMatrix();
  const double mass = m.trunk_mass + physics_.added_mass;

  // joint PD with torque limits
  const double tau_cap = m.tau_max * physics_.motor_scale;
  state_.tau = (m.kp * (q_des_ - state_.q) - m.kd * state_.qd)
                   .cwiseMax(-tau_cap)
                   .cwiseMin(tau_cap);

  updateFeet();

  // foot contacts: vertical spring-damper plus anchored Coulomb friction
  Eigen::Vector3d force_sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque_sum = Eigen::Vector3d::Zero();
  Eigen::VectorXd contact_tau = Eigen::VectorXd::Zero(12);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Eigen::Vector3d& p = state_.foot_pos[leg];
    const Eigen::Vector3d& v = state_.foot_vel[leg];
    const double pen = terrain_.heightAt(p.x(), p.y()) - p.z();
    if (pen <= 0.0) {
      state_.foot_force[leg].setZero();
      state_.foot_in_contact[leg] = false;
      state_.foot_anchor[leg] = p.head<2>();
      continue;
    }
    const double normal =
        std::max(0.0, config_.contact_kn * pen - config_.contact_dn * v.z());
    if (!state_.foot_in_contact[leg]) {
      state_.foot_anchor[leg] = p.head<2>();
      state_.foot_in_contact[leg] = true;
    }
    Eigen::Vector2d tangent = -config_.contact_kt * (p.head<2>() - state_.foot_anchor[leg]) -
                              config_.contact_dt * v.head<2>();
    const double cap = physics_.friction * normal;
    if (tangent.norm() > cap) {
      tangent = cap * tangent.normalized();
      // slip: anchor moves to where the spring alone reproduces the cap
      state_.foot_anchor[leg] = p.head<2>() + tangent / config_.contact_kt;
    }
    const Eigen::Vector3d f(tangent.x(), tangent.y(), normal);
    state_.foot_force[leg] = f;
    force_sum += f;
    torque_sum += (p - state_.base_pos).cross(f);

    const Eigen::Matrix3d jac = legJacobian(m.leg, m.side_signs[leg],
                                            state_.q.segment<3>(3 * leg));
    contact_tau.segment<3>(3 * leg) = jac.transpose() * (rot.transpose() * f);
  }

  // massless-leg joint dynamics under actuator torque and contact load
  const Eigen::VectorXd qdd = (state_.tau + contact_tau) / m.joint_inertia;
  state_.qd += qdd * dt;
  state_.q += state_.qd * dt;
  for (int i = 0; i < 12; ++i) {
    const double lo = m.q_lower[i % 3], hi = m.q_upper[i % 3];
    if (state_.q[i] < lo) {
      state_.q[i] = lo;
      state_.qd[i] = std::max(state_.qd[i], 0.0);
    } else if (state_.q[i] > hi) {
      state_.q[i] = hi;
      state_.qd[i] = std::min(state_.qd[i], 0.0);
    }
  }

  // trunk rigid-body update (semi-implicit Euler)
  force_sum += state_.ext_force;
  torque_sum += (state_.ext_point - state_.base_pos).cross(state_.ext_force);
  force_sum.z() -= mass * config_.gravity;

  state_.base_lin_vel += force_sum / mass * dt;
  state_.base_pos += state_.base_lin_vel * dt;

  const Eigen::Vector3d inertia = m.trunk_inertia;
  Eigen::Vector3d w_body = rot.transpose() * state_.base_ang_vel;
  const Eigen::Vector3d t_body = rot.transpose() * torque_sum;
  const Eigen::Vector3d iw(inertia.x() * w_body.x(), inertia.y() * w_body.y(),
                           inertia.z() * w_body.z());
  const Eigen::Vector3d wdot((t_body.x() - (w_body.y() * iw.z() - w_body.z() * iw.y())) / inertia.x(),
                             (t_body.y() - (w_body.z() * iw.x() - w_body.x() * iw.z())) / inertia.y(),
                             (t_body.z() - (w_body.x() * iw.y() - w_body.y() * iw.x())) / inertia.z());
  w_body += wdot * dt;
  state_.base_ang_vel = rot * w_body;

  const double wn = state_.base_ang_vel.norm();
  if (wn > 1e-12) {
    const Eigen::AngleAxisd spin(wn * dt, state_.base_ang_vel / wn);
    state_.base_quat = (Eigen::Quaterniond(spin) * state_.base_quat).normalized();
  }
}

Eigen::Vector3d SimEnv::footWorld(int leg) const {
  const QuadrupedModel& m = config_.model;
  const Eigen::Vector3d rel =
      m.hip_offsets[leg] +
      legForward(m.leg, m.side_signs[leg], state_.q.segment<3>(3 * leg));
  return state_.base_pos + state_.base_quat * rel;
}

void SimEnv::updateFeet() {
  const QuadrupedModel& m = config_.model;
  const Eigen::Matrix3d rot = state_.base_quat.toRotationMatrix();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Eigen::Vector3d q_leg = state_.q.segment<3>(3 * leg);
    const Eigen::Vector3d rel =
        m.hip_offsets[leg] + legForward(m.leg, m.side_signs[leg], q_leg);
    state_.foot_pos[leg] = state_.base_pos + rot * rel;
    const Eigen::Matrix3d jac = legJacobian(m.leg, m.side_signs[leg], q_leg);
    state_.foot_vel[leg] = state_.base_lin_vel +
                           state_.base_ang_vel.cross(rot * rel) +
                           rot * (jac * state_.qd.segment<3>(3 * leg));
  }
}

int SimEnv::countCollisions() const {
  const QuadrupedModel& m = config_.model;
  const Eigen::Matrix3d rot = state_.base_quat.toRotationMatrix();
  int count = 0;

  const Eigen::Vector3d half = m.trunk_half_dims;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const Eigen::Vector3d corner =
          state_.base_pos + rot * Eigen::Vector3d(sx * half.x(), sy * half.y(), -half.z());
      if (corner.z() < terrain_.heightAt(corner.x(), corner.y())) ++count;
    }
  }

  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Eigen::Vector3d q_leg = state_.q.segment<3>(3 * leg);
    const double side = m.side_signs[leg];
    const double c1 = std::cos(q_leg[0]), s1 = std::sin(q_leg[0]);
    const double yp = side * m.leg.l_abd;

    // hip point after abduction roll
    const Eigen::Vector3d hip_rel =
        m.hip_offsets[leg] + Eigen::Vector3d(0.0, yp * c1, yp * s1);
    const Eigen::Vector3d hip_w = state_.base_pos + rot * hip_rel;
    if (hip_w.z() < terrain_.heightAt(hip_w.x(), hip_w.y())) ++count;

    // knee joint
    const double xk = -m.leg.l_thigh * std::sin(q_leg[1]);
    const double zk = -m.leg.l_thigh * std::cos(q_leg[1]);
    const Eigen::Vector3d knee_rel =
        m.hip_offsets[leg] + Eigen::Vector3d(xk, yp * c1 - zk * s1, yp * s1 + zk * c1);
    const Eigen::Vector3d knee_w = state_.base_pos + rot * knee_rel;
    if (knee_w.z() < terrain_.heightAt(knee_w.x(), knee_w.y())) ++count;

    // calf midpoint
    const Eigen::Vector3d calf_mid = 0.5 * (knee_w + state_.foot_pos[leg]);
    if (calf_mid.z() < terrain_.heightAt(calf_mid.x(), calf_mid.y())) ++count;
  }
  return count;
}

Eigen::VectorXd SimEnv::observePartial() const {
  const Eigen::Matrix3d rot_t = state_.base_quat.toRotationMatrix().transpose();
  Eigen::VectorXd obs(kPartialObsDim);
  obs.segment<3>(0) = rot_t * Eigen::Vector3d(0, 0, -1);
  obs.segment<3>(3) = rot_t * state_.base_ang_vel;
  obs.segment<12>(6) = state_.q;
  obs.segment<12>(18) = state_.qd;
  obs.segment<12>(30) = state_.prev_action;
  return obs;
}

Eigen::VectorXd SimEnv::observePrivileged() const {
  const Eigen::Matrix3d rot_t = state_.base_quat.toRotationMatrix().transpose();
  Eigen::VectorXd obs(21);
  obs.segment<3>(0) = rot_t * state_.base_lin_vel;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    obs.segment<3>(3 + 3 * leg) = rot_t * state_.foot_force[leg];
  }
  obs.segment<3>(15) = rot_t * state_.ext_force;
  obs.segment<3>(18) = rot_t * (state_.ext_point - state_.base_pos);
  return obs;
}

Eigen::VectorXd SimEnv::heightmapScan() const {
  // 17 x 11 grid, 1.6 m x 1.0 m span, yaw-aligned, heights relative to base
  const Eigen::Quaterniond& q = state_.base_quat;
  const double yaw = std::atan2(2.0 * (q.w() * q.z() + q.x() * q.y()),
                                1.0 - 2.0 * (q.y() * q.y() + q.z() * q.z()));
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Eigen::VectorXd scan(17 * 11);
  int k = 0;
  for (int ix = 0; ix < 17; ++ix) {
    const double dx = -0.8 + 0.1 * ix;
    for (int iy = 0; iy < 11; ++iy) {
      const double dy = -0.5 + 0.1 * iy;
      const double x = state_.base_pos.x() + cy * dx - sy * dy;
      const double y = state_.base_pos.y() + sy * dx + cy * dy;
      scan[k++] = terrain_.heightAt(x, y) - state_.base_pos.z();
    }
  }
  return scan;
}

Termination SimEnv::checkTermination(double elapsed_s) const {
  const QuadrupedModel& m = config_.model;
  const Eigen::Matrix3d rot = state_.base_quat.toRotationMatrix();
  const Eigen::Vector3d half = m.trunk_half_dims;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const Eigen::Vector3d corner =
          state_.base_pos + rot * Eigen::Vector3d(sx * half.x(), sy * half.y(), -half.z());
      if (corner.z() < terrain_.heightAt(corner.x(), corner.y())) {
        return Termination::kTerminated;
      }
    }
  }
  if (state_.fault) return Termination::kTerminated;
  if (elapsed_s >= config_.episode_seconds) return Termination::kTimeout;
  return Termination::kRunning;
}

double SimEnv::baseHeightAboveTerrain() const {
  return state_.base_pos.z() -
         terrain_.heightAt(state_.base_pos.x(), state_.base_pos.y());
}

Eigen::Vector3d SimEnv::baseLinVelBody() const {
  return state_.base_quat.toRotationMatrix().transpose() * state_.base_lin_vel;
}

std::array<double, kNumLegs> SimEnv::footXySpeeds() const {
  std::array<double, kNumLegs> speeds;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    speeds[leg] = state_.foot_vel[leg].head<2>().norm();
  }
  return speeds;
}

std::array<bool, kNumLegs> SimEnv::footContacts() const {
  return state_.foot_in_contact;
}

}  // namespace multigait
