#include "errsim/kinematics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace errsim {

std::array<Pose, kNumJoints> link_transforms(const DhTable& dh, const JointVector& q) {
  std::array<Pose, kNumJoints> out;
  Pose acc;
  for (int i = 0; i < kNumJoints; ++i) {
    acc = acc * dh_transform(dh.rows[i], q[i]);
    out[i] = acc;
  }
  return out;
}

Pose forward_kinematics(const DhTable& dh, const JointVector& q) {
  if (!dh.within_limits(q)) {
    std::ostringstream msg;
    msg << "forward_kinematics: joints out of limits, q = [" << q.transpose() << "]";
    throw std::invalid_argument(msg.str());
  }
  Pose acc;
  for (int i = 0; i < kNumJoints; ++i) acc = acc * dh_transform(dh.rows[i], q[i]);
  return acc;
}

Eigen::Matrix<double, 6, 6> geometric_jacobian(const DhTable& dh, const JointVector& q) {
  const auto frames = link_transforms(dh, q);
  const Eigen::Vector3d tip = frames[kNumJoints - 1].translation;

  Eigen::Matrix<double, 6, 6> jac;
  for (int i = 0; i < kNumJoints; ++i) {
    // TransZ(d) shifts the origin along the joint axis, so frame i's z-axis
    // and origin describe joint i in both conventions' senses.
    const Eigen::Vector3d z = frames[i].rotation.col(2);
    if (dh.rows[i].kind == JointKind::Revolute) {
      jac.block<3, 1>(0, i) = z.cross(tip - frames[i].translation);
      jac.block<3, 1>(3, i) = z;
    } else {
      jac.block<3, 1>(0, i) = z;
      jac.block<3, 1>(3, i).setZero();
    }
  }
  return jac;
}

namespace {

// World-frame pose residual: [t_target - t_cur; rotvec(R_target * R_cur^T)].
Eigen::Matrix<double, 6, 1> pose_residual(const Pose& target, const Pose& current) {
  Eigen::Matrix<double, 6, 1> r;
  r.head<3>() = target.translation - current.translation;
  const Eigen::AngleAxisd aa(target.rotation * current.rotation.transpose());
  r.tail<3>() = aa.angle() * aa.axis();
  return r;
}

}  // namespace

IkResult inverse_kinematics(const DhTable& dh, const Pose& target,
                            const JointVector& seed, const IkOptions& opts) {
  IkResult res;
  res.q = dh.clamp(seed);

  // Polish well past the reported tolerance so near-singular configurations
  // still land within joint-space accuracy of the seed branch.
  const double inner_pos = opts.tol_pos * 1e-4;
  const double inner_rot = opts.tol_rot * 1e-4;
  const double lambda2 = opts.damping * opts.damping;

  Pose current = forward_kinematics(dh, res.q);
  Eigen::Matrix<double, 6, 1> r = pose_residual(target, current);
  res.residual_pos = r.head<3>().norm();
  res.residual_rot = r.tail<3>().norm();

  for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
    if (res.residual_pos <= inner_pos && res.residual_rot <= inner_rot) break;

    const Eigen::Matrix<double, 6, 6> jac = geometric_jacobian(dh, res.q);
    const Eigen::Matrix<double, 6, 6> h =
        jac.transpose() * jac + lambda2 * Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::Matrix<double, 6, 1> dq = h.ldlt().solve(jac.transpose() * r);

    for (int i = 0; i < kNumJoints; ++i) {
      dq[i] = std::min(std::max(dq[i], -opts.max_step), opts.max_step);
    }
    if (dq.lpNorm<Eigen::Infinity>() < 1e-16) break;  // stalled

    res.q = dh.clamp(res.q + dq);
    current = forward_kinematics(dh, res.q);
    r = pose_residual(target, current);
    res.residual_pos = r.head<3>().norm();
    res.residual_rot = r.tail<3>().norm();
  }

  res.converged = res.residual_pos <= opts.tol_pos && res.residual_rot <= opts.tol_rot;
  return res;
}

}  // namespace errsim
