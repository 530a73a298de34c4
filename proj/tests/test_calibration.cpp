#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "errsim/calibration.hpp"
#include "test_util.hpp"

using namespace errsim;

namespace {

// Forward-generates observations from known transforms: B = Y^-1 A X, so the
// pair (A, B) satisfies A X = Y B exactly. Only pose algebra is used here, no
// solver machinery.
std::vector<MarkerObservation> synth_observations(const Pose& x_true, const Pose& y_true,
                                                  int count, Rng& rng,
                                                  double noise_t = 0.0, double noise_r = 0.0) {
  std::vector<MarkerObservation> obs;
  obs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const Pose a = test::random_pose(rng, 0.3);
    Pose b = y_true.inverse() * a * x_true;
    if (noise_t > 0.0 || noise_r > 0.0) {
      Eigen::Vector3d axis;
      for (int k = 0; k < 3; ++k) axis[k] = rng.normal();
      axis.normalize();
      b.rotation = Eigen::AngleAxisd(rng.normal(noise_r), axis).toRotationMatrix() * b.rotation;
      for (int k = 0; k < 3; ++k) b.translation[k] += rng.normal(noise_t);
    }
    obs.push_back({a, b});
  }
  return obs;
}

Pose make_x() { return rot_z(0.4) * rot_x(-0.3) * translate({0.02, -0.01, 0.04}); }
Pose make_y() { return rot_y(1.9) * rot_z(0.3) * translate({0.6, -0.2, 0.5}); }

}  // namespace

TEST_CASE("noiseless recovery is exact to 1e-8") {
  Rng rng(101);
  const Pose x_true = make_x();
  const Pose y_true = make_y();
  const auto obs = synth_observations(x_true, y_true, 25, rng);

  const HandEyeSolution sol = solve_hand_eye(obs);
  CHECK(rotation_distance(sol.gripper_marker, x_true) < 1e-8);
  CHECK(translation_error(sol.gripper_marker, x_true) < 1e-8);

  const Pose y_rec = sol.tracker_robot.inverse();
  CHECK(rotation_distance(y_rec, y_true) < 1e-8);
  CHECK(translation_error(y_rec, y_true) < 1e-8);

  CHECK(sol.residual_rot < 1e-9);
  CHECK(sol.residual_trans < 1e-9);
}

TEST_CASE("noisy recovery stays within bounds over seeds") {
  const Pose x_true = make_x();
  const Pose y_true = make_y();
  constexpr double sigma_t = 1e-4;                              // 0.1 mm
  constexpr double sigma_r = 0.05 * std::numbers::pi / 180.0;   // 0.05 deg

  double worst_rot = 0.0, worst_trans = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    const auto obs = synth_observations(x_true, y_true, 40, rng, sigma_t, sigma_r);
    const HandEyeSolution sol = solve_hand_eye(obs);

    worst_rot = std::max(worst_rot, rotation_distance(sol.gripper_marker, x_true));
    worst_rot = std::max(worst_rot, rotation_distance(sol.tracker_robot.inverse(), y_true));
    worst_trans = std::max(worst_trans, translation_error(sol.gripper_marker, x_true));
    worst_trans = std::max(worst_trans, translation_error(sol.tracker_robot.inverse(), y_true));

    // residuals reflect the injected noise level
    CHECK(sol.residual_trans > 1e-6);
    CHECK(sol.residual_trans < 10.0 * sigma_t);
    CHECK(sol.residual_rot < 10.0 * sigma_r);
  }
  CHECK(worst_rot < 0.2 * std::numbers::pi / 180.0);
  CHECK(worst_trans < 0.5e-3);
}

TEST_CASE("residuals grow with noise") {
  const Pose x_true = make_x();
  const Pose y_true = make_y();
  double prev = -1.0;
  for (double sigma : {0.0, 1e-4, 1e-3}) {
    Rng rng(77);
    const auto obs = synth_observations(x_true, y_true, 30, rng, sigma, sigma);
    const HandEyeSolution sol = solve_hand_eye(obs);
    CHECK(sol.residual_trans > prev);
    prev = sol.residual_trans;
  }
}

TEST_CASE("too few observations") {
  Rng rng(5);
  const auto obs = synth_observations(make_x(), make_y(), 5, rng);
  CHECK_THROWS_AS(solve_hand_eye(obs), CalibrationError);
  CHECK_NOTHROW(solve_hand_eye(obs, 5));
}

TEST_CASE("single rotation axis is rejected as degenerate") {
  const Pose x_true = make_x();
  const Pose y_true = make_y();
  Rng rng(6);
  std::vector<MarkerObservation> obs;
  for (int i = 0; i < 15; ++i) {
    Pose a = rot_z(0.3 * i);  // every relative rotation shares the z axis
    a.translation << rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2);
    obs.push_back({a, y_true.inverse() * a * x_true});
  }
  CHECK_THROWS_AS(solve_hand_eye(obs), CalibrationError);
}

TEST_CASE("compute_actual_pose identities") {
  Rng rng(8);
  HandEyeSolution ident;
  const Pose p = test::random_pose(rng);
  const Pose out = compute_actual_pose(ident, p);
  CHECK(rotation_distance(out, p) < 1e-14);
  CHECK(translation_error(out, p) < 1e-14);
}

TEST_CASE("compute_actual_pose chained consistency") {
  Rng rng(9);
  HandEyeSolution sol;
  sol.gripper_marker = make_x();
  sol.tracker_robot = make_y().inverse();
  for (int trial = 0; trial < 20; ++trial) {
    const Pose a1 = test::random_pose(rng, 0.3);
    // marker measurement that an actual pose a1 would produce
    const Pose otm = sol.tracker_robot * a1 * sol.gripper_marker;
    const Pose back = compute_actual_pose(sol, otm);
    CHECK(rotation_distance(back, a1) < 1e-13);
    CHECK(translation_error(back, a1) < 1e-13);
  }
}

TEST_CASE("left-multiplying tracker measurements shifts only tracker_robot") {
  Rng rng(10);
  const Pose x_true = make_x();
  const Pose y_true = make_y();
  auto obs = synth_observations(x_true, y_true, 25, rng);
  const HandEyeSolution base = solve_hand_eye(obs);

  const Pose g = rot_x(0.8) * translate({0.1, 0.0, -0.2});
  for (MarkerObservation& ob : obs) ob.tracker_marker = g * ob.tracker_marker;
  const HandEyeSolution shifted = solve_hand_eye(obs);

  CHECK(rotation_distance(shifted.gripper_marker, base.gripper_marker) < 1e-8);
  CHECK(translation_error(shifted.gripper_marker, base.gripper_marker) < 1e-8);

  const Pose expected = g * base.tracker_robot;
  CHECK(rotation_distance(shifted.tracker_robot, expected) < 1e-8);
  CHECK(translation_error(shifted.tracker_robot, expected) < 1e-8);
}
