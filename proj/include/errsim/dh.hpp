#pragma once

#include <array>

#include "errsim/pose.hpp"

namespace errsim {

inline constexpr int kNumJoints = 6;

/// Joint vector q1..q6. Entries 1, 2, 4, 5, 6 are radians, entry 3 meters.
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

/// Wraps an angle to (-pi, pi].
double wrap_to_pi(double angle);

enum class JointKind { Revolute, Prismatic };

/// One row of a modified (Craig) DH table. The link transform is
///   T = RotX(alpha) * TransX(a) * RotZ(theta + q) * TransZ(d)        revolute
///   T = RotX(alpha) * TransX(a) * RotZ(theta) * TransZ(d + q)        prismatic
/// where alpha and a belong to the preceding link.
struct DhRow {
  double a = 0.0;      // preceding link length [m]
  double alpha = 0.0;  // preceding link twist [rad]
  double d = 0.0;      // offset along z [m]
  double theta = 0.0;  // offset about z [rad]
  JointKind kind = JointKind::Revolute;
  double lower = 0.0;  // joint limit [rad] or [m]
  double upper = 0.0;
};

struct DhTable {
  std::array<DhRow, kNumJoints> rows;

  JointVector lower_limits() const;
  JointVector upper_limits() const;
  JointVector clamp(const JointVector& q) const;
  bool within_limits(const JointVector& q, double slack = 1e-9) const;

  /// Throws std::invalid_argument unless limits are ordered and exactly one
  /// row is prismatic. Applied to tables loaded from configuration.
  void validate() const;
};

/// Link transform for one DH row at joint value q.
Pose dh_transform(const DhRow& row, double q);

/// Illustrative 6-joint RR-P-RRR chain with a 0.05-0.29 m insertion reach.
/// The wrist alignment singularity sits at |q5| = pi/2, outside the limits.
DhTable default_dh_table();

}  // namespace errsim
