#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "errsim/pose.hpp"

namespace errsim {

/// One paired measurement: gripper pose in the robot base frame (from the
/// encoders through forward kinematics) and marker pose in the tracker frame.
struct MarkerObservation {
  Pose robot_gripper;   // gripper in robot base frame
  Pose tracker_marker;  // marker in tracker frame
};

/// The two fixed transforms linking the frames, plus the RMS fit mismatch.
struct HandEyeSolution {
  Pose gripper_marker;  // marker in gripper frame
  Pose tracker_robot;   // robot base in tracker frame
  double residual_rot = 0.0;   // [rad], RMS over observations
  double residual_trans = 0.0; // [m]
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solves the AX = YB registration problem over all observations, where
/// A = robot_gripper, B = tracker_marker, X = gripper_marker and
/// Y = tracker_robot^-1.
///
/// Rotations are recovered first: each observation contributes the linear
/// constraint qA (x) qX = qY (x) qB, stacked as [L(qA) -R(qB)] into a 4n x 8
/// system whose smallest right singular vector holds (qX, qY). Translations
/// then follow from the linear least-squares system
/// R_A tX - tY = R_Y tB - tA.
///
/// Throws CalibrationError when fewer than min_count observations are given
/// or when the relative rotations do not span two sufficiently distinct axes
/// (all axes within 15 degrees of each other).
HandEyeSolution solve_hand_eye(std::span<const MarkerObservation> observations,
                               int min_count = 10);

/// Actual gripper pose from a tracker measurement:
/// tracker_robot^-1 * tracker_marker * gripper_marker^-1.
Pose compute_actual_pose(const HandEyeSolution& solution, const Pose& tracker_marker);

}  // namespace errsim
