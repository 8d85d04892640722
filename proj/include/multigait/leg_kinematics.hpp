#pragma once

#include <Eigen/Dense>

namespace multigait {

// 3-DoF leg: hip abduction (roll about x), hip pitch and knee pitch (about y).
// Link lengths follow a Go1-class morphology.
struct LegGeometry {
  double l_abd = 0.08;    // lateral hip link [m]
  double l_thigh = 0.213; // [m]
  double l_calf = 0.213;  // [m]
};

// Foot position relative to the hip mount, expressed in base-frame axes.
// side is +1 for left legs, -1 for right legs. q = (abduction, hip, knee).
Eigen::Vector3d legForward(const LegGeometry& geom, double side,
                           const Eigen::Vector3d& q);

// Closed-form inverse kinematics; throws std::domain_error when the target
// is outside the reachable shell.
Eigen::Vector3d legInverse(const LegGeometry& geom, double side,
                           const Eigen::Vector3d& foot_rel_hip);

// d(foot)/d(q), base-frame axes.
Eigen::Matrix3d legJacobian(const LegGeometry& geom, double side,
                            const Eigen::Vector3d& q);

}  // namespace multigait
