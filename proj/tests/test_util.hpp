#pragma once

#include "errsim/pose.hpp"
#include "errsim/rng.hpp"

namespace errsim::test {

/// Uniform random rotation via a normalized 4-normal quaternion draw.
inline Pose random_pose(Rng& rng, double translation_scale = 1.0) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q[i] = rng.normal();
  q.normalize();
  Pose p;
  p.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
  for (int i = 0; i < 3; ++i) p.translation[i] = rng.uniform(-translation_scale, translation_scale);
  return p;
}

}  // namespace errsim::test
