#include "errsim/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "errsim/rng.hpp"

namespace errsim {

Trajectory generate_trajectory(const DhTable& dh, const TrajectoryOptions& opts) {
  if (opts.n_goals < 1) {
    throw std::invalid_argument("generate_trajectory: n_goals must be >= 1");
  }
  if ((opts.interpolation_step.array() <= 0.0).any()) {
    throw std::invalid_argument("generate_trajectory: interpolation_step must be > 0");
  }
  if (opts.goal_margin < 0.0 || opts.goal_margin >= 0.5) {
    throw std::invalid_argument("generate_trajectory: goal_margin must be in [0, 0.5)");
  }

  const JointVector lo = dh.lower_limits();
  const JointVector hi = dh.upper_limits();

  Trajectory traj;
  traj.seed = opts.seed;
  traj.interpolation_step = opts.interpolation_step;

  JointVector current = 0.5 * (lo + hi);
  traj.setpoints.push_back(current);

  Rng rng(opts.seed);
  const auto capped = [&] {
    return opts.max_steps != 0 && traj.setpoints.size() >= opts.max_steps;
  };

  for (int g = 0; g < opts.n_goals && !capped(); ++g) {
    JointVector goal;
    for (int i = 0; i < kNumJoints; ++i) {
      const double margin = opts.goal_margin * (hi[i] - lo[i]);
      goal[i] = rng.uniform(lo[i] + margin, hi[i] - margin);
    }

    const JointVector delta = goal - current;
    int substeps = 1;
    for (int i = 0; i < kNumJoints; ++i) {
      substeps = std::max(
          substeps, static_cast<int>(std::ceil(std::abs(delta[i]) / opts.interpolation_step[i])));
    }
    for (int s = 1; s <= substeps && !capped(); ++s) {
      traj.setpoints.push_back(current + (static_cast<double>(s) / substeps) * delta);
    }
    current = traj.setpoints.back();
  }
  return traj;
}

}  // namespace errsim
