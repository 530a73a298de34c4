#pragma once

#include "errsim/mlp.hpp"
#include "errsim/trajectory.hpp"

namespace errsim {

/// One step of the three-stage injection. The invariant
/// actual_q = setpoint_q + alpha1 + alpha2 holds exactly unless the step had
/// to be clamped to the joint limits, in which case `clamped` is set.
struct InjectionResult {
  std::size_t k = 0;
  JointVector setpoint_q = JointVector::Zero();
  JointVector alpha1 = JointVector::Zero();
  JointVector alpha2 = JointVector::Zero();
  JointVector measured_q = JointVector::Zero();  // setpoint + alpha1
  JointVector actual_q = JointVector::Zero();    // setpoint + alpha1 + alpha2, clamped
  Pose actual_pose;                              // FK(nominal, actual_q)
  bool clamped = false;
};

/// Three-stage error injection over a setpoint sequence:
///   1. alpha1 = nn1(features of the setpoint)
///   2. alpha2 = nn2(features of setpoint + alpha1)
///   3. the ideal simulated robot realizes FK(nominal, setpoint + alpha1 + alpha2)
/// Previous-measurement features thread the injected measured state; the
/// first step uses its own setpoint as the previous state. Setpoints are
/// never altered. Throws std::invalid_argument on role mismatch.
std::vector<InjectionResult> inject(const MlpModel& nn1, const MlpModel& nn2,
                                    const Trajectory& setpoints, const DhTable& nominal);

}  // namespace errsim
