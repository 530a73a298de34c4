#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "errsim/calibration.hpp"
#include "errsim/kinematics.hpp"
#include "errsim/rng.hpp"
#include "errsim/trajectory.hpp"

namespace errsim {

/// Bounds for the one-time random perturbation applied to the nominal DH
/// table to obtain the twin's true kinematics.
struct DhPerturbation {
  double a = 0.0;      // [m]
  double d = 0.0;      // [m]
  double alpha = 0.0;  // [rad]
  double theta = 0.0;  // [rad]
  std::uint64_t seed = 0;
};

/// dh_true = nominal with each of a, d, alpha, theta shifted by a uniform
/// draw in [-bound, +bound]. Joint kinds and limits are preserved.
DhTable perturb_dh(const DhTable& nominal, const DhPerturbation& perturbation);

struct TrackerNoise {
  double sigma_t = 0.0;  // [m], per translation axis
  double sigma_r = 0.0;  // [rad], rotation angle about a random axis
};

/// Full description of the synthetic physical robot.
struct TwinConfig {
  DhTable dh_nominal;
  DhTable dh_true;
  JointVector controller_gains = JointVector::Zero();      // steady-state offset scale
  JointVector hysteresis_magnitude = JointVector::Zero();  // [rad]/[m]
  JointVector backlash_width = JointVector::Zero();        // [rad]/[m]
  JointVector noise_sigma_joint = JointVector::Zero();     // encoder noise
  TrackerNoise tracker_noise;
  HandEyeSolution handeye_true;  // ground-truth frames, residuals zero
  std::uint64_t noise_seed = 1;

  /// Throws std::invalid_argument on negative magnitudes or mismatched tables.
  void validate() const;
};

/// One collected trajectory step. `actual_pose` / `actual_q` hold the
/// tracker-derived estimate once a collection has been calibrated; the
/// `true_*` fields are twin-internal ground truth and never enter training
/// data.
struct StepRecord {
  std::size_t k = 0;
  JointVector setpoint_q = JointVector::Zero();
  JointVector measured_q = JointVector::Zero();
  Pose actual_pose;
  std::optional<JointVector> actual_q;
  Pose tracker_marker;
  std::optional<Pose> true_actual_pose;
  std::optional<JointVector> true_actual_q;
};

/// Configuration-dependent controller offset c_i = gains_i * f_i(q), a smooth
/// proxy for gravity-dependent steady-state error. Every component varies
/// with the configuration so that each joint's offset distribution has
/// structure rather than a point mass.
JointVector controller_offset(const JointVector& gains, const JointVector& q);

/// Direction-dependent cable term: direction * (hysteresis - backlash/2)
/// per joint, with direction in {-1, +1}.
JointVector hysteresis_offset(const JointVector& hysteresis,
                              const JointVector& backlash,
                              const JointVector& direction);

/// Synthetic stand-in for the physical robot. Sequential by nature: the
/// hysteresis direction depends on the previously measured state.
class PhysicalTwin {
 public:
  explicit PhysicalTwin(TwinConfig cfg);

  /// Applies controller error, encoder noise, cable hysteresis/backlash and
  /// the true (perturbed) kinematics to one setpoint. Joint states are
  /// clamped to the limits, mimicking hard stops. Throws on an out-of-limit
  /// setpoint. `actual_pose` is set to the ground-truth pose; run_collection
  /// replaces it with the tracker-derived estimate.
  StepRecord step(const JointVector& setpoint, const JointVector& prev_measured);

  /// Runs the whole trajectory, fits a hand-eye calibration on the collected
  /// (gripper, marker) pairs, and fills actual_pose / actual_q from the
  /// tracker data through that calibration. The twin's own handeye_true is
  /// never used for the estimates. Restarts the noise stream, so identical
  /// (config, trajectory) inputs give bit-identical records.
  std::vector<StepRecord> run_collection(const Trajectory& trajectory);

  const TwinConfig& config() const { return cfg_; }

 private:
  TwinConfig cfg_;
  Rng rng_;
  std::size_t k_ = 0;
};

}  // namespace errsim
