#pragma once

#include <array>

#include "errsim/inject.hpp"
#include "errsim/stats.hpp"
#include "errsim/twin.hpp"

namespace errsim {

/// Layer indices for the two error distributions under comparison.
inline constexpr int kLayerMeasuredMinusSetpoint = 0;
inline constexpr int kLayerActualMinusMeasured = 1;

/// Full statistical comparison of a physical collection against an injected
/// simulation of the same setpoint sequence. Distances are stored in meters
/// and radians; reporting converts to mm / deg.
struct ComparisonReport {
  // Per-step pose distances between the physical actual pose and the
  // simulated actual pose, with injection and without (ideal robot at the
  // raw setpoint).
  std::vector<double> et_injected;   // [m]
  std::vector<double> er_injected;   // [rad]
  std::vector<double> et_baseline;
  std::vector<double> er_baseline;

  ErrorStats stats_et_injected;
  ErrorStats stats_er_injected;
  ErrorStats stats_et_baseline;
  ErrorStats stats_er_baseline;

  // Two-sample KS per joint for both error layers.
  std::array<std::array<double, kNumJoints>, 2> ks{};

  // Raw per-joint samples behind the KS values, kept for histogram export.
  std::array<std::array<std::vector<double>, kNumJoints>, 2> physical_samples;
  std::array<std::array<std::vector<double>, kNumJoints>, 2> simulated_samples;
};

/// Requires equal lengths, aligned k and matching setpoints; the physical
/// records must carry actual_q (run populate_actual_joints first when they
/// come from a dataset file). Throws std::invalid_argument otherwise.
ComparisonReport compare(std::span<const StepRecord> physical,
                         std::span<const InjectionResult> simulated,
                         const DhTable& nominal);

}  // namespace errsim
