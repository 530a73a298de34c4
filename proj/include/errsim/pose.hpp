#pragma once

#include <Eigen/Dense>

namespace errsim {

/// Rigid transform in SE(3). Rotation is a 3x3 orthonormal matrix with
/// det = +1, translation is in meters.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }

  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  Pose inverse() const {
    const Eigen::Matrix3d rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// Checks ||R^T R - I||_F and det(R) against tol.
  bool is_valid(double tol = 1e-9) const;
};

Pose rot_x(double angle);
Pose rot_y(double angle);
Pose rot_z(double angle);
Pose translate(const Eigen::Vector3d& t);

/// Nearest orthonormal matrix in the Frobenius sense, det forced to +1.
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

/// Builds a pose from a (w, x, y, z) quaternion and a translation.
/// The quaternion is renormalized; throws std::invalid_argument if its norm
/// deviates from 1 by more than 1e-6.
Pose pose_from_quat(double w, double x, double y, double z,
                    const Eigen::Vector3d& t);

/// Unit quaternion (w, x, y, z) of the rotation, sign-canonicalized so the
/// largest-magnitude component is positive.
Eigen::Vector4d quat_from_pose(const Pose& p);

/// Euclidean distance between the two translations. Ignores rotation.
double translation_error(const Pose& a, const Pose& b);

/// Angle of the relative rotation a.R * b.R^T, via the trace formula with the
/// arccos argument clamped to [-1, 1]. Symmetric, in [0, pi], never NaN.
/// This is the reported rotation metric; note the arccos form cannot resolve
/// angles below ~1e-8.
double rotation_error(const Pose& a, const Pose& b);

/// Same angle through the quaternion atan2 form, accurate down to machine
/// precision near zero. Used for solver residuals and tight test tolerances.
double rotation_distance(const Pose& a, const Pose& b);

}  // namespace errsim
