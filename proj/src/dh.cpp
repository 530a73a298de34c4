#include "errsim/dh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace errsim {

double wrap_to_pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

JointVector DhTable::lower_limits() const {
  JointVector lo;
  for (int i = 0; i < kNumJoints; ++i) lo[i] = rows[i].lower;
  return lo;
}

JointVector DhTable::upper_limits() const {
  JointVector hi;
  for (int i = 0; i < kNumJoints; ++i) hi[i] = rows[i].upper;
  return hi;
}

JointVector DhTable::clamp(const JointVector& q) const {
  JointVector out;
  for (int i = 0; i < kNumJoints; ++i) {
    out[i] = std::min(std::max(q[i], rows[i].lower), rows[i].upper);
  }
  return out;
}

bool DhTable::within_limits(const JointVector& q, double slack) const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (q[i] < rows[i].lower - slack || q[i] > rows[i].upper + slack) return false;
  }
  return true;
}

void DhTable::validate() const {
  int prismatic = 0;
  for (int i = 0; i < kNumJoints; ++i) {
    const DhRow& r = rows[i];
    if (!(r.lower < r.upper)) {
      throw std::invalid_argument("DhTable: row " + std::to_string(i + 1) +
                                  " limits must satisfy lower < upper");
    }
    if (r.kind == JointKind::Prismatic) ++prismatic;
  }
  if (prismatic != 1) {
    throw std::invalid_argument("DhTable: expected exactly one prismatic row, got " +
                                std::to_string(prismatic));
  }
}

Pose dh_transform(const DhRow& row, double q) {
  const double theta = row.kind == JointKind::Revolute ? row.theta + q : row.theta;
  const double d = row.kind == JointKind::Prismatic ? row.d + q : row.d;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);

  Pose p;
  p.rotation << ct, -st, 0.0,
      st * ca, ct * ca, -sa,
      st * sa, ct * sa, ca;
  p.translation << row.a, -sa * d, ca * d;
  return p;
}

DhTable default_dh_table() {
  constexpr double half_pi = std::numbers::pi / 2.0;
  DhTable t;
  t.rows[0] = {0.0, 0.0, 0.0, 0.0, JointKind::Revolute, -1.30, 1.30};
  t.rows[1] = {0.0, -half_pi, 0.0, -half_pi, JointKind::Revolute, -0.90, 0.90};
  t.rows[2] = {0.0, half_pi, 0.05, 0.0, JointKind::Prismatic, 0.00, 0.24};
  t.rows[3] = {0.0, 0.0, 0.0, 0.0, JointKind::Revolute, -2.20, 2.20};
  t.rows[4] = {0.0, -half_pi, 0.0, -half_pi, JointKind::Revolute, -1.50, 1.50};
  t.rows[5] = {0.009, half_pi, 0.0, 0.0, JointKind::Revolute, -1.40, 1.40};
  return t;
}

}  // namespace errsim
