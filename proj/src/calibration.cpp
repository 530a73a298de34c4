#include "errsim/calibration.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace errsim {

namespace {

// Kronecker product of two 3x3 matrices, column-major vec convention:
// vec(B X A^T) = (A (x) B) vec(X).
Eigen::Matrix<double, 9, 9> kron3(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  Eigen::Matrix<double, 9, 9> m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
    }
  }
  return m;
}

// Requires two relative gripper rotations whose axes differ by more than
// 15 degrees; with a single axis the problem is unobservable.
void check_rotation_diversity(std::span<const MarkerObservation> obs) {
  constexpr double kMinAngle = 1e-3;  // usable rotation
  constexpr double kMinAxisSeparation = 15.0 / 180.0 * std::numbers::pi;

  std::vector<std::pair<double, Eigen::Vector3d>> axes;  // (angle, unit axis)
  for (std::size_t i = 1; i < obs.size(); ++i) {
    const Eigen::Matrix3d rel =
        obs[i - 1].robot_gripper.rotation.transpose() * obs[i].robot_gripper.rotation;
    const Eigen::AngleAxisd aa(rel);
    if (std::abs(aa.angle()) > kMinAngle) {
      axes.emplace_back(std::abs(aa.angle()), aa.axis());
    }
  }
  if (axes.size() < 2) {
    throw CalibrationError("solve_hand_eye: degenerate motion, fewer than two "
                           "usable relative rotations");
  }
  std::sort(axes.begin(), axes.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const Eigen::Vector3d primary = axes.front().second;
  double best = 0.0;
  for (std::size_t i = 1; i < axes.size(); ++i) {
    // Axes are unsigned directions, so compare through |dot|.
    const double sep = std::acos(std::min(1.0, std::abs(primary.dot(axes[i].second))));
    best = std::max(best, sep);
  }
  if (best <= kMinAxisSeparation) {
    throw CalibrationError("solve_hand_eye: degenerate motion, relative rotation "
                           "axes within 15 deg of a single direction");
  }
}

}  // namespace

HandEyeSolution solve_hand_eye(std::span<const MarkerObservation> observations,
                               int min_count) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  if (n < min_count) {
    throw CalibrationError("solve_hand_eye: too few observations (" +
                           std::to_string(n) + " < " + std::to_string(min_count) + ")");
  }
  check_rotation_diversity(observations);

  // Rotations: R_A X = Y R_B vectorizes to
  //   [(I (x) R_A)  -(R_B^T (x) I)] [vec(X); vec(Y)] = 0;
  // the stacked system's smallest right singular vector holds both rotations
  // up to a common scale.
  Eigen::MatrixXd m(9 * n, 18);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Matrix3d& ra = observations[i].robot_gripper.rotation;
    const Eigen::Matrix3d& rb = observations[i].tracker_marker.rotation;
    m.block<9, 9>(9 * i, 0) = kron3(Eigen::Matrix3d::Identity(), ra);
    m.block<9, 9>(9 * i, 9) = -kron3(rb.transpose(), Eigen::Matrix3d::Identity());
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const Eigen::VectorXd v = svd.matrixV().col(17);

  // det(s R) = s^3 recovers the unknown scale, including its sign; project
  // back to the nearest rotation afterwards.
  const auto unvec = [](const Eigen::VectorXd& w) {
    Eigen::Matrix3d r;
    for (int c = 0; c < 3; ++c) r.col(c) = w.segment<3>(3 * c);
    return r;
  };
  Eigen::Matrix3d rx_raw = unvec(v.head(9));
  Eigen::Matrix3d ry_raw = unvec(v.tail(9));
  rx_raw /= std::cbrt(rx_raw.determinant());
  ry_raw /= std::cbrt(ry_raw.determinant());
  const Eigen::Matrix3d rx = nearest_rotation(rx_raw);
  const Eigen::Matrix3d ry = nearest_rotation(ry_raw);

  // Translations: R_A tX - tY = R_Y tB - tA, linear in (tX, tY).
  Eigen::MatrixXd lhs(3 * n, 6);
  Eigen::VectorXd rhs(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lhs.block<3, 3>(3 * i, 0) = observations[i].robot_gripper.rotation;
    lhs.block<3, 3>(3 * i, 3) = -Eigen::Matrix3d::Identity();
    rhs.segment<3>(3 * i) = ry * observations[i].tracker_marker.translation -
                            observations[i].robot_gripper.translation;
  }
  const Eigen::VectorXd t = lhs.colPivHouseholderQr().solve(rhs);

  HandEyeSolution sol;
  sol.gripper_marker = {rx, t.head<3>()};
  const Pose y{ry, t.tail<3>()};  // tracker frame in robot base coordinates
  sol.tracker_robot = y.inverse();

  double sum_rot = 0.0, sum_trans = 0.0;
  for (const MarkerObservation& ob : observations) {
    const Pose left = ob.robot_gripper * sol.gripper_marker;
    const Pose right = y * ob.tracker_marker;
    sum_rot += std::pow(rotation_distance(left, right), 2);
    sum_trans += std::pow(translation_error(left, right), 2);
  }
  sol.residual_rot = std::sqrt(sum_rot / static_cast<double>(n));
  sol.residual_trans = std::sqrt(sum_trans / static_cast<double>(n));
  return sol;
}

Pose compute_actual_pose(const HandEyeSolution& solution, const Pose& tracker_marker) {
  return solution.tracker_robot.inverse() * tracker_marker *
         solution.gripper_marker.inverse();
}

}  // namespace errsim
