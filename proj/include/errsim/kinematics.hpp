#pragma once

#include "errsim/dh.hpp"

namespace errsim {

/// Base-to-frame-i transforms for i = 1..6. Does not check joint limits.
std::array<Pose, kNumJoints> link_transforms(const DhTable& dh, const JointVector& q);

/// End-effector pose as the product of the six link transforms.
/// Throws std::invalid_argument if q violates the joint limits.
Pose forward_kinematics(const DhTable& dh, const JointVector& q);

/// World-frame geometric Jacobian at the end-effector point.
/// Rows 0-2 map joint rates to linear velocity, rows 3-5 to angular velocity.
Eigen::Matrix<double, 6, 6> geometric_jacobian(const DhTable& dh, const JointVector& q);

struct IkOptions {
  double tol_pos = 1e-8;   // [m]
  double tol_rot = 1e-8;   // [rad]
  int max_iter = 200;
  double damping = 1e-4;   // Levenberg-style lambda
  double max_step = 0.5;   // per-joint update clamp [rad] or [m]
};

struct IkResult {
  JointVector q = JointVector::Zero();
  bool converged = false;
  int iterations = 0;
  double residual_pos = 0.0;  // [m]
  double residual_rot = 0.0;  // [rad]
};

/// Damped least-squares iteration on the 6-D pose residual, seeded by `seed`
/// and clamped to the joint limits every step, so the returned solution stays
/// on the branch nearest the seed. Iterates past the acceptance tolerances
/// (down to 1e-4 * tol) while the budget allows; `converged` reports whether
/// the final residuals meet tol_pos / tol_rot.
IkResult inverse_kinematics(const DhTable& dh, const Pose& target,
                            const JointVector& seed, const IkOptions& opts = {});

}  // namespace errsim
