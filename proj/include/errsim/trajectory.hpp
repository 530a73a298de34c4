#pragma once

#include <cstdint>
#include <vector>

#include "errsim/dh.hpp"

namespace errsim {

/// Joint-space setpoint sequence. Consecutive setpoints differ by at most
/// interpolation_step per joint and every setpoint respects the limits.
struct Trajectory {
  std::vector<JointVector> setpoints;
  std::uint64_t seed = 0;
  JointVector interpolation_step = JointVector::Zero();
};

struct TrajectoryOptions {
  int n_goals = 1;
  JointVector interpolation_step = JointVector::Constant(0.02);
  double goal_margin = 0.02;   // fraction of each joint range kept clear of the limits
  std::size_t max_steps = 0;   // 0 = uncapped; otherwise truncate once reached
  std::uint64_t seed = 0;
};

/// Samples n_goals uniform in-limit goal configurations and linearly
/// interpolates between them in joint space. The sequence starts at the
/// mid-range configuration, which is included as setpoint 0. Deterministic
/// for a fixed seed.
Trajectory generate_trajectory(const DhTable& dh, const TrajectoryOptions& opts);

}  // namespace errsim
