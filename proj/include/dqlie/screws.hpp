#pragma once

#include "dqlie/pose.hpp"

namespace dqlie {

/// Frame a twist is expressed in. Moving frame unless stated otherwise.
enum class Frame { moving, fixed };

/// Angular velocity w and translational velocity v encoded as phi = w/2 + eps v/2.
class Twist {
 public:
  Twist() = default;
  explicit Twist(const VectorDualQuaternion& screw, Frame frame = Frame::moving) : screw_(screw), frame_(frame) {}
  static Twist from_velocities(const Vec3& w, const Vec3& v, Frame frame = Frame::moving) {
    return Twist(VectorDualQuaternion::from_ab(w, v), frame);
  }

  const VectorDualQuaternion& screw() const { return screw_; }
  Frame frame() const { return frame_; }
  Vec3 angular() const { return screw_.a(); }
  Vec3 linear() const { return screw_.b(); }

 private:
  VectorDualQuaternion screw_;
  Frame frame_ = Frame::moving;
};

/// Torque q and force p at the moving-frame origin, in moving-frame coordinates.
/// The screw form 2q + 2 eps p is built on demand.
class Wrench {
 public:
  Wrench() : torque_(Vec3::Zero()), force_(Vec3::Zero()) {}
  Wrench(const Vec3& torque, const Vec3& force) : torque_(torque), force_(force) {}
  static Wrench from_screw(const VectorDualQuaternion& tau) {
    return {0.5 * tau.primary_vec(), 0.5 * tau.dual_vec()};
  }

  const Vec3& torque() const { return torque_; }
  const Vec3& force() const { return force_; }
  VectorDualQuaternion screw() const { return VectorDualQuaternion::from_parts(2.0 * torque_, 2.0 * force_); }

  friend Wrench operator+(const Wrench& a, const Wrench& b) { return {a.torque_ + b.torque_, a.force_ + b.force_}; }
  friend Wrench operator-(const Wrench& a, const Wrench& b) { return {a.torque_ - b.torque_, a.force_ - b.force_}; }

 private:
  Vec3 torque_;
  Vec3 force_;
};

/// eta theta eta^-1 for a vector dual quaternion theta.
VectorDualQuaternion conjugate_by(const Pose& eta, const VectorDualQuaternion& theta);

/// phi = eta^-1 eta_dot (moving) or eta_dot eta^-1 (fixed).
Twist twist_from_pose_rate(const Pose& eta, const DualQuaternion& eta_dot, Frame frame = Frame::moving);
/// eta_dot = eta phi (moving) or phi eta (fixed).
DualQuaternion pose_rate(const Pose& eta, const Twist& phi);

/// Re-expresses a twist in the other frame: phi_f = eta phi_m eta^-1 and its inverse.
Twist twist_change_frame(const Pose& eta, const Twist& phi);
/// phi_dot_f = eta phi_dot_m eta^-1.
VectorDualQuaternion accel_change_frame(const Pose& eta, const VectorDualQuaternion& phi_dot_m);
/// phi_ddot_f = eta phi_ddot_m eta^-1 + eta (phi phi_dot - phi_dot phi) eta^-1, all inputs moving-frame.
VectorDualQuaternion jerk_change_frame(const Pose& eta, const VectorDualQuaternion& phi_m,
                                       const VectorDualQuaternion& phi_dot_m,
                                       const VectorDualQuaternion& phi_ddot_m);

/// phi_0 = phi + eps (w x r0)/2.
Twist twist_about_com(const Twist& phi, const Vec3& r0);
/// tau_0 = tau + 2 p x r0, i.e. the torque shifts by p x r0.
Wrench wrench_about_com(const Wrench& tau, const Vec3& r0);

/// tau . phi = q.w + p.v. Both must be moving-frame quantities.
double work_rate(const Wrench& tau, const Twist& phi);

/// (alpha beta - beta alpha)/2.
VectorDualQuaternion screw_cross(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta);
/// With alpha = a + eps b, beta = c + eps d: c x a + d x b + eps (c x b).
VectorDualQuaternion screw_ltimes(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta);
/// alpha rtimes beta = -(beta ltimes alpha).
VectorDualQuaternion screw_rtimes(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta);

}  // namespace dqlie
