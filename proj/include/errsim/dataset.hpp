#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errsim/twin.hpp"

namespace errsim {

/// Input feature layout.
///  OC:  current joints only (6 features)
///  CP:  current joints + previous measured joints (12)
///  CPE: current joints + per-joint motion direction sign in {-1, +1} (12)
enum class Encoding { OC, CP, CPE };

enum class NetRole { NN1, NN2 };

std::string to_string(Encoding e);
std::string to_string(NetRole r);
Encoding encoding_from_string(const std::string& s);
NetRole role_from_string(const std::string& s);

int feature_width(Encoding e);

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Supervised joint-offset regression set.
struct ErrorDataset {
  std::vector<Eigen::VectorXd> inputs;
  std::vector<JointVector> targets;
  Encoding encoding = Encoding::OC;
  NetRole role = NetRole::NN1;
};

/// Feature vector for one step. `current` is the joint configuration the
/// network conditions on, `prev_measured` the previously measured joints.
/// For CPE a zero per-joint delta encodes +1.
Eigen::VectorXd encode_features(const JointVector& current,
                                const JointVector& prev_measured, Encoding encoding);

/// Builds the training set from ordered records.
///  NN1: input from the setpoint joints, target measured - setpoint.
///  NN2: input from the measured joints, target actual - measured, where the
///       actual joints come from the record or, if absent, from inverse
///       kinematics of actual_pose under the nominal table.
/// CP/CPE drop the first record (no previous measurement exists).
/// Throws DatasetError on unordered records, too few records, or an inverse
/// kinematics failure (naming the step).
ErrorDataset build_dataset(std::span<const StepRecord> records, NetRole role,
                           Encoding encoding, const DhTable& nominal);

/// Fills actual_q on every record that lacks it via inverse kinematics of
/// actual_pose seeded from measured_q. Throws DatasetError naming the step on
/// failure.
void populate_actual_joints(std::vector<StepRecord>& records, const DhTable& nominal);

}  // namespace errsim
