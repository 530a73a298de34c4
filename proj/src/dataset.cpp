#include "errsim/dataset.hpp"

namespace errsim {

std::string to_string(Encoding e) {
  switch (e) {
    case Encoding::OC: return "OC";
    case Encoding::CP: return "CP";
    case Encoding::CPE: return "CPE";
  }
  return "OC";
}

std::string to_string(NetRole r) { return r == NetRole::NN1 ? "NN1" : "NN2"; }

Encoding encoding_from_string(const std::string& s) {
  if (s == "OC") return Encoding::OC;
  if (s == "CP") return Encoding::CP;
  if (s == "CPE") return Encoding::CPE;
  throw std::invalid_argument("unknown encoding: " + s);
}

NetRole role_from_string(const std::string& s) {
  if (s == "NN1") return NetRole::NN1;
  if (s == "NN2") return NetRole::NN2;
  throw std::invalid_argument("unknown network role: " + s);
}

int feature_width(Encoding e) { return e == Encoding::OC ? kNumJoints : 2 * kNumJoints; }

Eigen::VectorXd encode_features(const JointVector& current,
                                const JointVector& prev_measured, Encoding encoding) {
  Eigen::VectorXd x(feature_width(encoding));
  x.head<kNumJoints>() = current;
  switch (encoding) {
    case Encoding::OC:
      break;
    case Encoding::CP:
      x.tail<kNumJoints>() = prev_measured;
      break;
    case Encoding::CPE:
      for (int i = 0; i < kNumJoints; ++i) {
        x[kNumJoints + i] = current[i] >= prev_measured[i] ? 1.0 : -1.0;
      }
      break;
  }
  return x;
}

namespace {

JointVector actual_joints_of(const StepRecord& rec, const DhTable& nominal) {
  if (rec.actual_q) return *rec.actual_q;
  const IkResult ik = inverse_kinematics(nominal, rec.actual_pose, rec.measured_q);
  if (!ik.converged) {
    throw DatasetError("dataset: inverse kinematics of actual pose failed at step " +
                       std::to_string(rec.k) + " (residual " +
                       std::to_string(ik.residual_pos) + " m, " +
                       std::to_string(ik.residual_rot) + " rad)");
  }
  return ik.q;
}

}  // namespace

ErrorDataset build_dataset(std::span<const StepRecord> records, NetRole role,
                           Encoding encoding, const DhTable& nominal) {
  const std::size_t first = encoding == Encoding::OC ? 0 : 1;
  if (records.size() < first + 1) {
    throw DatasetError("dataset: need at least " + std::to_string(first + 1) +
                       " records for encoding " + to_string(encoding));
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].k <= records[i - 1].k) {
      throw DatasetError("dataset: records not ordered by k at position " +
                         std::to_string(i));
    }
  }

  ErrorDataset ds;
  ds.encoding = encoding;
  ds.role = role;
  ds.inputs.reserve(records.size() - first);
  ds.targets.reserve(records.size() - first);

  for (std::size_t i = first; i < records.size(); ++i) {
    const StepRecord& rec = records[i];
    const JointVector prev =
        i == 0 ? rec.measured_q : records[i - 1].measured_q;
    if (role == NetRole::NN1) {
      ds.inputs.push_back(encode_features(rec.setpoint_q, prev, encoding));
      ds.targets.push_back(rec.measured_q - rec.setpoint_q);
    } else {
      ds.inputs.push_back(encode_features(rec.measured_q, prev, encoding));
      ds.targets.push_back(actual_joints_of(rec, nominal) - rec.measured_q);
    }
  }
  return ds;
}

void populate_actual_joints(std::vector<StepRecord>& records, const DhTable& nominal) {
  for (StepRecord& rec : records) {
    if (!rec.actual_q) rec.actual_q = actual_joints_of(rec, nominal);
  }
}

}  // namespace errsim
