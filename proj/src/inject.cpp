#include "errsim/inject.hpp"

#include <stdexcept>

namespace errsim {

std::vector<InjectionResult> inject(const MlpModel& nn1, const MlpModel& nn2,
                                    const Trajectory& setpoints, const DhTable& nominal) {
  if (nn1.role != NetRole::NN1 || nn2.role != NetRole::NN2) {
    throw std::invalid_argument("inject: models passed in the wrong roles");
  }
  nn1.check_shapes();
  nn2.check_shapes();

  std::vector<InjectionResult> out;
  out.reserve(setpoints.setpoints.size());

  JointVector prev_measured =
      setpoints.setpoints.empty() ? JointVector::Zero() : setpoints.setpoints.front();
  for (std::size_t k = 0; k < setpoints.setpoints.size(); ++k) {
    const JointVector& s = setpoints.setpoints[k];

    InjectionResult r;
    r.k = k;
    r.setpoint_q = s;
    r.alpha1 = nn1.predict(encode_features(s, prev_measured, nn1.encoding));
    r.measured_q = s + r.alpha1;
    r.alpha2 = nn2.predict(encode_features(r.measured_q, prev_measured, nn2.encoding));

    const JointVector raw = s + r.alpha1 + r.alpha2;
    r.actual_q = nominal.clamp(raw);
    r.clamped = (r.actual_q - raw).lpNorm<Eigen::Infinity>() > 0.0;
    r.actual_pose = forward_kinematics(nominal, r.actual_q);

    prev_measured = r.measured_q;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace errsim
