#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errsim/pose.hpp"
#include "test_util.hpp"

using namespace errsim;

namespace {
constexpr double kDeg90 = std::numbers::pi / 2.0;
}

TEST_CASE("compose identity and inverse") {
  Rng rng(42);
  const Pose p = test::random_pose(rng);

  const Pose ip = Pose::identity() * p;
  CHECK((ip.rotation - p.rotation).norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((ip.translation - p.translation).norm() == doctest::Approx(0.0).epsilon(1e-15));

  const Pose round = p * p.inverse();
  CHECK((round.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(round.translation.norm() < 1e-12);
}

TEST_CASE("planar rotation composition") {
  Pose a = rot_z(kDeg90);
  a.translation << 1.0, 0.0, 0.0;
  const Pose b = rot_z(kDeg90);
  const Pose c = a * b;

  const Pose expected = rot_z(2.0 * kDeg90);
  CHECK((c.rotation - expected.rotation).norm() < 1e-12);
  CHECK((c.translation - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() < 1e-12);
}

TEST_CASE("inverse of pure translation") {
  const Pose p = translate({1.0, 2.0, 3.0});
  const Pose inv = p.inverse();
  CHECK((inv.translation - Eigen::Vector3d(-1.0, -2.0, -3.0)).norm() < 1e-15);
  CHECK((inv.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-15);

  Rng rng(7);
  const Pose q = test::random_pose(rng);
  const Pose twice = q.inverse().inverse();
  CHECK((twice.rotation - q.rotation).norm() < 1e-14);
  CHECK((twice.translation - q.translation).norm() < 1e-14);
}

TEST_CASE("group laws over random poses") {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose a = test::random_pose(rng);
    const Pose b = test::random_pose(rng);
    const Pose c = test::random_pose(rng);

    const Pose left = (a * b) * c;
    const Pose right = a * (b * c);
    CHECK((left.rotation - right.rotation).norm() < 1e-12);
    CHECK((left.translation - right.translation).norm() < 1e-12);

    const Pose li = a.inverse() * a;
    const Pose ri = a * a.inverse();
    CHECK((li.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(li.translation.norm() < 1e-12);
    CHECK((ri.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(ri.translation.norm() < 1e-12);
  }
}

TEST_CASE("translation error basics") {
  const Pose a;
  Pose b;
  CHECK(translation_error(a, b) == 0.0);

  b.translation << 3e-3, 4e-3, 0.0;
  CHECK(translation_error(a, b) == doctest::Approx(5e-3).epsilon(1e-12));

  // rotation-only difference
  const Pose c = rot_y(1.2);
  CHECK(translation_error(a, c) == 0.0);
}

TEST_CASE("rotation error basics and clamp") {
  const Pose a;
  CHECK(rotation_error(a, a) == 0.0);

  for (double theta : {0.1, 1.0, 3.0}) {
    CHECK(rotation_error(a, rot_z(theta)) == doctest::Approx(theta).epsilon(1e-12));
  }

  // trace slightly above 3 from numerical dirt must clamp, not NaN
  Pose noisy;
  noisy.rotation = Eigen::Matrix3d::Identity() * (1.0 + 1e-15);
  const double e = rotation_error(a, noisy);
  CHECK(std::isfinite(e));
  CHECK(e == 0.0);
}

TEST_CASE("rotation error symmetry and left invariance") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Pose a = test::random_pose(rng);
    const Pose b = test::random_pose(rng);
    const Pose g = test::random_pose(rng);

    CHECK(rotation_error(a, b) == doctest::Approx(rotation_error(b, a)).epsilon(1e-12));
    CHECK(rotation_error(g * a, g * b) ==
          doctest::Approx(rotation_error(a, b)).epsilon(1e-10));
    CHECK(rotation_error(a, b) >= 0.0);
    CHECK(rotation_error(a, b) <= std::numbers::pi);
    CHECK(!std::isnan(rotation_error(a, b)));
  }
}

TEST_CASE("translation error invariant to rotating both poses' rotations") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Pose a = test::random_pose(rng);
    Pose b = test::random_pose(rng);
    const double base = translation_error(a, b);

    const Pose g = test::random_pose(rng);
    a.rotation = a.rotation * g.rotation;
    b.rotation = b.rotation * g.rotation;
    CHECK(translation_error(a, b) == doctest::Approx(base).epsilon(1e-15));
  }
}

TEST_CASE("quaternion round trip and validation") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Pose p = test::random_pose(rng);
    const Eigen::Vector4d q = quat_from_pose(p);
    CHECK(std::abs(q.norm() - 1.0) < 1e-12);
    const Pose back = pose_from_quat(q[0], q[1], q[2], q[3], p.translation);
    CHECK((back.rotation - p.rotation).norm() < 1e-12);
    CHECK(back.is_valid());
  }
  CHECK_THROWS_AS(pose_from_quat(1.0, 0.5, 0.0, 0.0, Eigen::Vector3d::Zero()),
                  std::invalid_argument);
}

TEST_CASE("nearest rotation projects noisy matrices back onto SO(3)") {
  Rng rng(6);
  const Pose p = test::random_pose(rng);
  Eigen::Matrix3d noisy = p.rotation;
  noisy(0, 1) += 1e-4;
  noisy(2, 0) -= 2e-4;
  const Eigen::Matrix3d r = nearest_rotation(noisy);
  CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((r - p.rotation).norm() < 1e-3);
}
