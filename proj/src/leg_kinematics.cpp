#include "multigait/leg_kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace multigait {

Eigen::Vector3d legForward(const LegGeometry& geom, double side,
                           const Eigen::Vector3d& q) {
  const double q1 = q[0], q2 = q[1], q3 = q[2];
  const double xp = -geom.l_thigh * std::sin(q2) - geom.l_calf * std::sin(q2 + q3);
  const double zp = -geom.l_thigh * std::cos(q2) - geom.l_calf * std::cos(q2 + q3);
  const double yp = side * geom.l_abd;
  const double c1 = std::cos(q1), s1 = std::sin(q1);
  return {xp, yp * c1 - zp * s1, yp * s1 + zp * c1};
}

Eigen::Vector3d legInverse(const LegGeometry& geom, double side,
                           const Eigen::Vector3d& p) {
  const double dx = p[0], dy = p[1], dz = p[2];
  const double r_yz2 = dy * dy + dz * dz;
  const double labd2 = geom.l_abd * geom.l_abd;
  if (r_yz2 < labd2) {
    throw std::domain_error("legInverse: target inside the abduction cylinder");
  }
  const double plane = std::sqrt(r_yz2 - labd2);  // leg-plane reach below hip
  const double q1 = std::atan2(dz, dy) - std::atan2(-plane, side * geom.l_abd);

  const double reach2 = dx * dx + plane * plane;
  const double lt = geom.l_thigh, lc = geom.l_calf;
  const double c3 = (reach2 - lt * lt - lc * lc) / (2.0 * lt * lc);
  if (c3 > 1.0 + 1e-12 || c3 < -1.0 - 1e-12) {
    throw std::domain_error("legInverse: target outside leg reach");
  }
  const double q3 = -std::acos(std::clamp(c3, -1.0, 1.0));  // knee folds back

  // planar solve with x = -A sin(q2) - B cos(q2), z = -A cos(q2) + B sin(q2)
  const double a = lt + lc * std::cos(q3);
  const double b = lc * std::sin(q3);
  const double xp = dx, zp = -plane;
  const double q2 = std::atan2(-a * xp + b * zp, -b * xp - a * zp);
  return {q1, q2, q3};
}

Eigen::Matrix3d legJacobian(const LegGeometry& geom, double side,
                            const Eigen::Vector3d& q) {
  const double q1 = q[0], q2 = q[1], q3 = q[2];
  const double lt = geom.l_thigh, lc = geom.l_calf;
  const double xp = -lt * std::sin(q2) - lc * std::sin(q2 + q3);
  const double zp = -lt * std::cos(q2) - lc * std::cos(q2 + q3);
  const double yp = side * geom.l_abd;
  const double c1 = std::cos(q1), s1 = std::sin(q1);
  const double dxp_dq3 = -lc * std::cos(q2 + q3);
  const double dzp_dq3 = lc * std::sin(q2 + q3);

  Eigen::Matrix3d j;
  j.col(0) << 0.0, -yp * s1 - zp * c1, yp * c1 - zp * s1;
  j.col(1) << zp, xp * s1, -xp * c1;
  j.col(2) << dxp_dq3, -dzp_dq3 * s1, dzp_dq3 * c1;
  return j;
}

}  // namespace multigait
