#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqlie/screws.hpp"
#include "support.hpp"

using namespace dqtest;

namespace {

/// Polynomial pose path eta(t) = normalize(c0 + c1 t + c2 t^2 + c3 t^3).
struct PolyPath {
  DualQuaternion c[4];
  Pose operator()(double t) const {
    DualQuaternion v = c[0] + t * c[1] + (t * t) * c[2] + (t * t * t) * c[3];
    return normalize(v);
  }
};

PolyPath random_path() {
  PolyPath p;
  p.c[0] = random_pose().value();
  for (int k = 1; k < 4; ++k) p.c[k] = random_dq(0.3);
  return p;
}

VectorDualQuaternion moving_twist(const PolyPath& path, double t, double h) {
  const DualQuaternion rate = (1.0 / (2 * h)) * (path(t + h).value() - path(t - h).value());
  return twist_from_pose_rate(path(t), rate).screw();
}

VectorDualQuaternion fixed_twist(const PolyPath& path, double t, double h) {
  const DualQuaternion rate = (1.0 / (2 * h)) * (path(t + h).value() - path(t - h).value());
  return twist_from_pose_rate(path(t), rate, Frame::fixed).screw();
}

}  // namespace

TEST_CASE("twist from pose rate") {
  CHECK(max_abs(twist_from_pose_rate(random_pose(), DualQuaternion{}).screw()) == 0.0);
  const VectorDualQuaternion theta = random_vdq();
  const Pose base = random_pose();
  for (double t : {0.0, 0.3, 1.7}) {
    // eta(t) = base exp(t theta) has constant moving twist theta
    const Pose e = base * dq_exp(t * theta);
    const DualQuaternion rate = e.value() * theta.to_dq();
    CHECK(max_abs(twist_from_pose_rate(e, rate).screw() - theta) < 1e-14);
    CHECK(max_abs(pose_rate(e, Twist(theta)) - rate) < 1e-15);
  }
  // sampled path: second-order agreement
  const PolyPath path = random_path();
  const double t = 0.4;
  const double h = 1e-3;
  const DualQuaternion fd = (1.0 / (2 * h)) * (path(t + h).value() - path(t - h).value());
  const DualQuaternion fd2 = (1.0 / h) * (path(t + h / 2).value() - path(t - h / 2).value());
  const Twist phi = twist_from_pose_rate(path(t), fd2);
  const double e1 = max_abs(pose_rate(path(t), phi) - fd);
  CHECK(e1 < 1e-5);
  const Twist phi_f = twist_from_pose_rate(path(t), fd, Frame::fixed);
  CHECK(max_abs(pose_rate(path(t), phi_f) - fd) < 1e-5);
}

TEST_CASE("frame changes") {
  const Twist phi(random_vdq());
  CHECK(max_abs(twist_change_frame(Pose::identity(), phi).screw() - phi.screw()) == 0.0);
  CHECK(twist_change_frame(Pose::identity(), phi).frame() == Frame::fixed);
  for (int n = 0; n < 1000; ++n) {
    const Pose e = random_pose();
    const Twist m(random_vdq());
    const Twist f = twist_change_frame(e, m);
    const Twist back = twist_change_frame(e, f);
    CHECK(back.frame() == Frame::moving);
    CHECK(max_abs(back.screw() - m.screw()) < 1e-12);
  }
  // pure rotation: w_f = Q w Q*
  const Pose rot = Pose::from_rotation_translation(rotation_quaternion(Vec3(1, 2, 3), 0.8), Vec3::Zero());
  const Vec3 w = random_vec3();
  const Twist f = twist_change_frame(rot, Twist::from_velocities(w, Vec3::Zero()));
  CHECK(max_abs(f.angular() - Eigen::AngleAxisd(0.8, Vec3(1, 2, 3).normalized()) * w) < 1e-14);
  CHECK(max_abs(f.linear()) < 1e-15);
}

TEST_CASE("acceleration and jerk frame changes against finite differences") {
  const PolyPath path = random_path();
  const double t = 0.3;
  const double h = 1e-3;  // inner step for twists
  const double H = 1e-2;  // outer step for derivatives of twists
  auto phi_m = [&](double s) { return moving_twist(path, s, h); };
  auto phi_f = [&](double s) { return fixed_twist(path, s, h); };
  const VectorDualQuaternion m0 = phi_m(t);
  const VectorDualQuaternion m_dot = (1.0 / (2 * H)) * (phi_m(t + H) - phi_m(t - H));
  const VectorDualQuaternion m_ddot = (1.0 / (H * H)) * (phi_m(t + H) - 2.0 * m0 + phi_m(t - H));
  const VectorDualQuaternion f_dot = (1.0 / (2 * H)) * (phi_f(t + H) - phi_f(t - H));
  const VectorDualQuaternion f_ddot = (1.0 / (H * H)) * (phi_f(t + H) - 2.0 * phi_f(t) + phi_f(t - H));
  CHECK(max_abs(accel_change_frame(path(t), m_dot) - f_dot) < 1e-3);
  CHECK(max_abs(jerk_change_frame(path(t), m0, m_dot, m_ddot) - f_ddot) < 1e-2);
  // without the commutator term the jerk mismatch is macroscopic
  const double naive = max_abs(accel_change_frame(path(t), m_ddot) - f_ddot);
  const double full = max_abs(jerk_change_frame(path(t), m0, m_dot, m_ddot) - f_ddot);
  CHECK(full < 0.1 * naive);
}

TEST_CASE("centre-of-mass corrections") {
  const Twist phi(random_vdq());
  CHECK(max_abs(twist_about_com(phi, Vec3::Zero()).screw() - phi.screw()) == 0.0);
  const Twist spin = Twist::from_velocities(Vec3::UnitZ(), Vec3::Zero());
  const Twist shifted = twist_about_com(spin, Vec3::UnitX());
  CHECK(max_abs(shifted.screw() - VectorDualQuaternion::from_parts(0.5 * Vec3::UnitZ(), 0.5 * Vec3::UnitY())) == 0.0);
  for (int n = 0; n < 1000; ++n) {
    const Twist p(random_vdq());
    const Wrench tau(random_vec3(), random_vec3());
    const Vec3 r0 = random_vec3();
    CHECK(std::abs(work_rate(tau, p) - work_rate(wrench_about_com(tau, r0), twist_about_com(p, r0))) < 1e-12);
  }
}

TEST_CASE("work rate") {
  const Wrench tau(Vec3::Zero(), Vec3::UnitZ());
  const Twist phi = Twist::from_velocities(Vec3::Zero(), Vec3::UnitZ());
  CHECK(work_rate(tau, phi) == 1.0);
  CHECK(work_rate(Wrench(Vec3::Zero(), Vec3::UnitX()), phi) == 0.0);
  CHECK_THROWS_AS(work_rate(tau, Twist(phi.screw(), Frame::fixed)), InvariantError);
  for (int n = 0; n < 100; ++n) {
    const Wrench t(random_vec3(), random_vec3());
    const Twist p = Twist::from_velocities(random_vec3(), random_vec3());
    CHECK(std::abs(work_rate(t, p) - (t.torque().dot(p.angular()) + t.force().dot(p.linear()))) < 1e-14);
    const Wrench back = Wrench::from_screw(t.screw());
    CHECK(max_abs(back.torque() - t.torque()) == 0.0);
  }
}

TEST_CASE("cross and adjoint products") {
  const VectorDualQuaternion i = VectorDualQuaternion::from_parts(Vec3::UnitX(), Vec3::Zero());
  const VectorDualQuaternion j = VectorDualQuaternion::from_parts(Vec3::UnitY(), Vec3::Zero());
  CHECK(screw_cross(i, j).coeffs() == VectorDualQuaternion::from_parts(Vec3::UnitZ(), Vec3::Zero()).coeffs());
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const VectorDualQuaternion a = random_vdq(), b = random_vdq(), c = random_vdq();
    // (ab - ba)/2 computed in the dual-quaternion algebra
    const DualQuaternion comm = 0.5 * (a.to_dq() * b.to_dq() - b.to_dq() * a.to_dq());
    CHECK(max_abs(screw_cross(a, b).to_dq() - comm) < 1e-14);
    const double lhs = dot(screw_cross(a, b), c);
    worst = std::max(worst, std::abs(lhs - dot(a, screw_ltimes(c, b))));
    worst = std::max(worst, std::abs(lhs - dot(b, screw_rtimes(a, c))));
    CHECK(max_abs(screw_rtimes(a, b) + screw_ltimes(b, a)) == 0.0);
    CHECK(max_abs(screw_cross(a, b) + screw_cross(b, a)) < 1e-15);
    const VectorDualQuaternion jac =
        screw_cross(a, screw_cross(b, c)) + screw_cross(b, screw_cross(c, a)) + screw_cross(c, screw_cross(a, b));
    CHECK(max_abs(jac) < 1e-12);
  }
  CHECK(worst < 1e-12);
}
