#include "errsim/pose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace errsim {

bool Pose::is_valid(double tol) const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).norm() >= tol) return false;
  if (std::abs(rotation.determinant() - 1.0) >= tol) return false;
  return translation.allFinite();
}

Pose rot_x(double angle) {
  Pose p;
  p.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
  return p;
}

Pose rot_y(double angle) {
  Pose p;
  p.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix();
  return p;
}

Pose rot_z(double angle) {
  Pose p;
  p.rotation = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return p;
}

Pose translate(const Eigen::Vector3d& t) {
  Pose p;
  p.translation = t;
  return p;
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

Pose pose_from_quat(double w, double x, double y, double z,
                    const Eigen::Vector3d& t) {
  const double norm = std::sqrt(w * w + x * x + y * y + z * z);
  if (std::abs(norm - 1.0) > 1e-6) {
    throw std::invalid_argument("pose_from_quat: quaternion norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  }
  Eigen::Quaterniond q(w / norm, x / norm, y / norm, z / norm);
  return {q.toRotationMatrix(), t};
}

Eigen::Vector4d quat_from_pose(const Pose& p) {
  const Eigen::Quaterniond q(p.rotation);
  Eigen::Vector4d v(q.w(), q.x(), q.y(), q.z());
  int largest = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(v[i]) > std::abs(v[largest])) largest = i;
  }
  if (v[largest] < 0.0) v = -v;
  return v / v.norm();
}

double translation_error(const Pose& a, const Pose& b) {
  return (a.translation - b.translation).norm();
}

double rotation_error(const Pose& a, const Pose& b) {
  const double tr = (a.rotation * b.rotation.transpose()).trace();
  const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

double rotation_distance(const Pose& a, const Pose& b) {
  const Eigen::Quaterniond q(Eigen::Matrix3d(a.rotation * b.rotation.transpose()));
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

}  // namespace errsim
