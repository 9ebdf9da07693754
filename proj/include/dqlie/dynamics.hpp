#pragma once

// Equations of motion tau = mu + M alpha for the end effector, including the
// reflected inertia of the actuators (M0) and uniform gravity.

#include "dqlie/models.hpp"

namespace dqlie {

using MatX = Eigen::MatrixXd;

struct MassModel {
  double m_e = 1.0;
  Mat3 M_e = Mat3::Identity();  // about the centre of mass, moving frame
  Vec3 r0 = Vec3::Zero();       // centre of mass, moving frame
  MatX M0;                      // n x n no-load actuator mass; empty means none
  Vec3 g_fixed = Vec3::Zero();  // gravity, fixed frame

  bool has_actuator_inertia() const { return M0.size() > 0; }
  /// Checks m_e > 0, M_e symmetric positive definite, M0 symmetric PSD of size n x n (or empty).
  void validate(std::size_t actuator_count) const;
};

/// Mass data shipped with the reference geometries (see data/).
MassModel reference_stewart_mass();
MassModel reference_pulley_mass();

/// Gravity pulled back into the moving frame.
Vec3 gravity_moving(const MassModel& mass, const Pose& eta);

/// 4 [M_e - m star(r0)^2, m star(r0); -m star(r0), m I].
Mat6 rigid_body_mass(const MassModel& mass);
/// rigid_body_mass + Lambda^T M0 Lambda.
Mat6 effective_mass(const MassModel& mass, const RobotModel& model, const Pose& eta);

/// L v = -2 m (r0 x g + eps g).
VectorDualQuaternion gravity_wrench_term(const MassModel& mass, const Pose& eta);

/// Everything needed for one right-hand-side evaluation.
struct DynamicsTerms {
  ModelEvaluation eval;
  Mat6 M;
  VectorDualQuaternion mu;
  VecX curvature;  // c_k = phi^T T_k phi = L_phi L_phi l_k; empty without actuator inertia
};

DynamicsTerms dynamics_terms(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi);

/// mu from the closed-form equation of motion.
Wrench bias_wrench(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi);

/// alpha = M^-1 (tau - mu), a moving-frame screw acceleration (phi_dot).
VectorDualQuaternion forward_dynamics(const MassModel& mass, const RobotModel& model, const Pose& eta,
                                      const Twist& phi, const Wrench& tau);

/// f0 = M0 (L_phi Lambda) phi + M0 Lambda alpha.
VecX no_load_forces(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi,
                    const VectorDualQuaternion& alpha);

/// phi . M phi / 2.
double kinetic_energy(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi);
/// -m g~ . (world position of r0).
double potential_energy(const MassModel& mass, const Pose& eta);

/// The general Lagrangian form mu = mu1 + mu2, computed through jets of M and v:
/// mu1 = (L_phi M) phi - [phi . (L_i M) phi]_i / 2 + L v,  mu2 = 2 (M phi) ltimes phi.
struct EulerLagrangeBias {
  VectorDualQuaternion mu1;
  VectorDualQuaternion mu2;
  VectorDualQuaternion total() const { return mu1 + mu2; }
};
EulerLagrangeBias euler_lagrange_bias(const MassModel& mass, const RobotModel& model, const Pose& eta,
                                      const Twist& phi);

}  // namespace dqlie
