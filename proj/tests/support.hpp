#pragma once

// Random inputs and comparison helpers shared by the unit tests.

#include <random>

#include <Eigen/Geometry>

#include "dqlie/pose.hpp"

namespace dqtest {

using namespace dqlie;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_vec3(double scale = 1.0) { return scale * Vec3(uniform(), uniform(), uniform()); }

inline Quaternion random_quaternion(double scale = 1.0) {
  return {scale * uniform(), scale * uniform(), scale * uniform(), scale * uniform()};
}

inline DualQuaternion random_dq(double scale = 1.0) { return {random_quaternion(scale), random_quaternion(scale)}; }

/// Dual quaternion with primary part bounded away from zero.
inline DualQuaternion random_invertible_dq() {
  DualQuaternion d = random_dq();
  d.primary.w += d.primary.w >= 0 ? 0.5 : -0.5;
  return d;
}

inline VectorDualQuaternion random_vdq(double scale = 1.0) {
  Vec6 c;
  for (int i = 0; i < 6; ++i) c[i] = scale * uniform();
  return VectorDualQuaternion(c);
}

inline Pose random_pose(double translation = 1.0) {
  Vec3 axis = random_vec3();
  while (axis.norm() < 1e-3) axis = random_vec3();
  return Pose::from_rotation_translation(rotation_quaternion(axis, uniform(-3.1, 3.1)), random_vec3(translation));
}

/// Rotation up to max_angle radians about a random axis, translation in a +-box cube.
inline Pose random_pose_near(double max_angle, double box) {
  Vec3 axis = random_vec3();
  while (axis.norm() < 1e-3) axis = random_vec3();
  return Pose::from_rotation_translation(rotation_quaternion(axis, uniform(0.0, max_angle)), random_vec3(box));
}

inline double max_abs(const Quaternion& q) {
  return std::max({std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)});
}

inline double max_abs(const DualQuaternion& d) { return std::max(max_abs(d.primary), max_abs(d.dual)); }

inline double max_abs(double v) { return std::abs(v); }

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline double max_abs(const VectorDualQuaternion& v) { return max_abs(v.coeffs()); }

}  // namespace dqtest
