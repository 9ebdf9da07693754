#include "dqlie/screws.hpp"

namespace dqlie {

VectorDualQuaternion conjugate_by(const Pose& eta, const VectorDualQuaternion& theta) {
  return VectorDualQuaternion::vector_part(eta.value() * theta.to_dq() * eta.value().conj());
}

Twist twist_from_pose_rate(const Pose& eta, const DualQuaternion& eta_dot, Frame frame) {
  const DualQuaternion inv = eta.value().conj();
  const DualQuaternion phi = frame == Frame::moving ? inv * eta_dot : eta_dot * inv;
  return Twist(VectorDualQuaternion::vector_part(phi), frame);
}

DualQuaternion pose_rate(const Pose& eta, const Twist& phi) {
  return phi.frame() == Frame::moving ? eta.value() * phi.screw().to_dq() : phi.screw().to_dq() * eta.value();
}

Twist twist_change_frame(const Pose& eta, const Twist& phi) {
  if (phi.frame() == Frame::moving) return Twist(conjugate_by(eta, phi.screw()), Frame::fixed);
  return Twist(conjugate_by(eta.inverse(), phi.screw()), Frame::moving);
}

VectorDualQuaternion accel_change_frame(const Pose& eta, const VectorDualQuaternion& phi_dot_m) {
  return conjugate_by(eta, phi_dot_m);
}

VectorDualQuaternion jerk_change_frame(const Pose& eta, const VectorDualQuaternion& phi_m,
                                       const VectorDualQuaternion& phi_dot_m,
                                       const VectorDualQuaternion& phi_ddot_m) {
  // phi phi_dot - phi_dot phi = 2 phi x phi_dot
  return conjugate_by(eta, phi_ddot_m + 2.0 * screw_cross(phi_m, phi_dot_m));
}

Twist twist_about_com(const Twist& phi, const Vec3& r0) {
  const Vec3 shift = 0.5 * phi.angular().cross(r0);
  return Twist(phi.screw() + VectorDualQuaternion::from_parts(Vec3::Zero(), shift), phi.frame());
}

Wrench wrench_about_com(const Wrench& tau, const Vec3& r0) {
  return {tau.torque() + tau.force().cross(r0), tau.force()};
}

double work_rate(const Wrench& tau, const Twist& phi) {
  if (phi.frame() != Frame::moving) throw InvariantError("work_rate needs a moving-frame twist");
  return dot(tau.screw(), phi.screw());
}

VectorDualQuaternion screw_cross(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta) {
  const Vec3 a = alpha.primary_vec();
  const Vec3 b = alpha.dual_vec();
  const Vec3 c = beta.primary_vec();
  const Vec3 d = beta.dual_vec();
  return VectorDualQuaternion::from_parts(a.cross(c), a.cross(d) + b.cross(c));
}

VectorDualQuaternion screw_ltimes(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta) {
  const Vec3 a = alpha.primary_vec();
  const Vec3 b = alpha.dual_vec();
  const Vec3 c = beta.primary_vec();
  const Vec3 d = beta.dual_vec();
  return VectorDualQuaternion::from_parts(c.cross(a) + d.cross(b), c.cross(b));
}

VectorDualQuaternion screw_rtimes(const VectorDualQuaternion& alpha, const VectorDualQuaternion& beta) {
  return -screw_ltimes(beta, alpha);
}

}  // namespace dqlie
