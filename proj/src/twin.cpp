#include "errsim/twin.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace errsim {

DhTable perturb_dh(const DhTable& nominal, const DhPerturbation& p) {
  Rng rng(p.seed);
  DhTable out = nominal;
  for (DhRow& row : out.rows) {
    row.a += rng.uniform(-p.a, p.a);
    row.alpha += rng.uniform(-p.alpha, p.alpha);
    row.d += rng.uniform(-p.d, p.d);
    row.theta += rng.uniform(-p.theta, p.theta);
  }
  return out;
}

void TwinConfig::validate() const {
  const auto nonneg = [](const JointVector& v, const char* name) {
    if ((v.array() < 0.0).any()) {
      throw std::invalid_argument(std::string("TwinConfig: ") + name +
                                  " must be non-negative");
    }
  };
  nonneg(hysteresis_magnitude, "hysteresis_magnitude");
  nonneg(backlash_width, "backlash_width");
  nonneg(noise_sigma_joint, "noise_sigma_joint");
  if (tracker_noise.sigma_t < 0.0 || tracker_noise.sigma_r < 0.0) {
    throw std::invalid_argument("TwinConfig: tracker noise must be non-negative");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (dh_true.rows[i].kind != dh_nominal.rows[i].kind ||
        dh_true.rows[i].lower != dh_nominal.rows[i].lower ||
        dh_true.rows[i].upper != dh_nominal.rows[i].upper) {
      throw std::invalid_argument(
          "TwinConfig: dh_true and dh_nominal must share joint kinds and limits");
    }
  }
}

JointVector controller_offset(const JointVector& gains, const JointVector& q) {
  JointVector f;
  f[0] = std::sin(q[1]);
  f[1] = std::cos(q[1]) * std::sin(q[0]);
  f[2] = q[2];
  // Wrist offsets follow the proximal posture so their distributions carry
  // configuration-dependent spread.
  f[3] = 0.2 + 0.8 * std::sin(q[0] + q[3]);
  f[4] = 0.2 + 0.8 * std::cos(q[1] + q[4]);
  f[5] = 0.2 + 0.8 * std::sin(q[0] - q[5]);
  return gains.cwiseProduct(f);
}

JointVector hysteresis_offset(const JointVector& hysteresis,
                              const JointVector& backlash,
                              const JointVector& direction) {
  return direction.cwiseProduct(hysteresis - 0.5 * backlash);
}

PhysicalTwin::PhysicalTwin(TwinConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.noise_seed) {
  cfg_.validate();
}

StepRecord PhysicalTwin::step(const JointVector& setpoint, const JointVector& prev_measured) {
  if (!cfg_.dh_nominal.within_limits(setpoint)) {
    std::ostringstream msg;
    msg << "twin step: setpoint out of limits [" << setpoint.transpose() << "]";
    throw std::invalid_argument(msg.str());
  }

  JointVector noise;
  for (int i = 0; i < kNumJoints; ++i) noise[i] = rng_.normal(cfg_.noise_sigma_joint[i]);

  StepRecord rec;
  rec.k = k_++;
  rec.setpoint_q = setpoint;
  rec.measured_q =
      cfg_.dh_nominal.clamp(setpoint + controller_offset(cfg_.controller_gains, setpoint) + noise);

  JointVector direction;
  for (int i = 0; i < kNumJoints; ++i) {
    direction[i] = setpoint[i] >= prev_measured[i] ? 1.0 : -1.0;
  }
  const JointVector actual_joints = cfg_.dh_true.clamp(
      rec.measured_q +
      hysteresis_offset(cfg_.hysteresis_magnitude, cfg_.backlash_width, direction));

  const Pose true_pose = forward_kinematics(cfg_.dh_true, actual_joints);
  rec.true_actual_pose = true_pose;
  rec.true_actual_q = actual_joints;
  rec.actual_pose = true_pose;  // until a calibration estimate replaces it

  Pose marker = cfg_.handeye_true.tracker_robot * true_pose * cfg_.handeye_true.gripper_marker;
  Eigen::Vector3d dt;
  for (int i = 0; i < 3; ++i) dt[i] = rng_.normal(cfg_.tracker_noise.sigma_t);
  Eigen::Vector3d axis;
  for (int i = 0; i < 3; ++i) axis[i] = rng_.normal();
  if (axis.norm() < 1e-12) axis = Eigen::Vector3d::UnitZ();
  axis.normalize();
  const double angle = rng_.normal(cfg_.tracker_noise.sigma_r);
  marker.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix() * marker.rotation;
  marker.translation += dt;
  rec.tracker_marker = marker;
  return rec;
}

std::vector<StepRecord> PhysicalTwin::run_collection(const Trajectory& trajectory) {
  if (trajectory.setpoints.empty()) {
    throw std::invalid_argument("run_collection: empty trajectory");
  }
  rng_ = Rng(cfg_.noise_seed);
  k_ = 0;

  std::vector<StepRecord> records;
  records.reserve(trajectory.setpoints.size());
  // The robot starts at rest at the first setpoint; ties resolve to +1.
  JointVector prev_measured = trajectory.setpoints.front();
  for (const JointVector& sp : trajectory.setpoints) {
    records.push_back(step(sp, prev_measured));
    prev_measured = records.back().measured_q;
  }

  // Mirror the hardware workflow: calibrate on this collection's own data,
  // then derive every actual pose from the tracker through that calibration.
  std::vector<MarkerObservation> observations;
  observations.reserve(records.size());
  for (const StepRecord& rec : records) {
    observations.push_back(
        {forward_kinematics(cfg_.dh_nominal, rec.measured_q), rec.tracker_marker});
  }
  const HandEyeSolution fit = solve_hand_eye(observations);

  for (StepRecord& rec : records) {
    rec.actual_pose = compute_actual_pose(fit, rec.tracker_marker);
    const IkResult ik =
        inverse_kinematics(cfg_.dh_nominal, rec.actual_pose, rec.measured_q);
    if (!ik.converged) {
      throw std::runtime_error("run_collection: inverse kinematics failed at step " +
                               std::to_string(rec.k) + " (residual " +
                               std::to_string(ik.residual_pos) + " m, " +
                               std::to_string(ik.residual_rot) + " rad)");
    }
    rec.actual_q = ik.q;
  }
  return records;
}

}  // namespace errsim
