#include "errsim/compare.hpp"

#include <stdexcept>
#include <string>

namespace errsim {

ComparisonReport compare(std::span<const StepRecord> physical,
                         std::span<const InjectionResult> simulated,
                         const DhTable& nominal) {
  if (physical.size() != simulated.size() || physical.empty()) {
    throw std::invalid_argument("compare: trajectories must be non-empty and equal length (" +
                                std::to_string(physical.size()) + " vs " +
                                std::to_string(simulated.size()) + ")");
  }
  for (std::size_t i = 0; i < physical.size(); ++i) {
    if (physical[i].k != simulated[i].k) {
      throw std::invalid_argument("compare: step indices diverge at position " +
                                  std::to_string(i));
    }
    if ((physical[i].setpoint_q - simulated[i].setpoint_q).lpNorm<Eigen::Infinity>() > 1e-9) {
      throw std::invalid_argument("compare: setpoints differ at step " +
                                  std::to_string(physical[i].k));
    }
    if (!physical[i].actual_q) {
      throw std::invalid_argument("compare: physical record " + std::to_string(physical[i].k) +
                                  " lacks actual joints; populate them first");
    }
  }

  ComparisonReport rep;
  rep.et_injected.reserve(physical.size());
  for (std::size_t i = 0; i < physical.size(); ++i) {
    const Pose& a1 = physical[i].actual_pose;
    const Pose& a2 = simulated[i].actual_pose;
    rep.et_injected.push_back(translation_error(a1, a2));
    rep.er_injected.push_back(rotation_error(a1, a2));

    const Pose ideal = forward_kinematics(nominal, physical[i].setpoint_q);
    rep.et_baseline.push_back(translation_error(a1, ideal));
    rep.er_baseline.push_back(rotation_error(a1, ideal));

    for (int j = 0; j < kNumJoints; ++j) {
      rep.physical_samples[kLayerMeasuredMinusSetpoint][j].push_back(
          physical[i].measured_q[j] - physical[i].setpoint_q[j]);
      rep.simulated_samples[kLayerMeasuredMinusSetpoint][j].push_back(
          simulated[i].alpha1[j]);
      rep.physical_samples[kLayerActualMinusMeasured][j].push_back(
          (*physical[i].actual_q)[j] - physical[i].measured_q[j]);
      rep.simulated_samples[kLayerActualMinusMeasured][j].push_back(
          simulated[i].alpha2[j]);
    }
  }

  rep.stats_et_injected = summarize(rep.et_injected);
  rep.stats_er_injected = summarize(rep.er_injected);
  rep.stats_et_baseline = summarize(rep.et_baseline);
  rep.stats_er_baseline = summarize(rep.er_baseline);

  for (int layer = 0; layer < 2; ++layer) {
    for (int j = 0; j < kNumJoints; ++j) {
      rep.ks[layer][j] = ks_statistic(rep.physical_samples[layer][j],
                                      rep.simulated_samples[layer][j]);
    }
  }
  return rep;
}

}  // namespace errsim
