#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqlie/dynamics.hpp"
#include "dqlie/liecalc.hpp"
#include "dqlie/screws.hpp"
#include "support.hpp"

using namespace dqtest;

namespace {

MassModel random_mass(std::size_t n, bool actuators) {
  MassModel m;
  m.m_e = uniform(0.5, 5.0);
  const Mat3 a = Mat3::Random();
  m.M_e = a * a.transpose() + 0.1 * Mat3::Identity();
  m.r0 = random_vec3(0.2);
  m.g_fixed = random_vec3(10.0);
  if (actuators) {
    const auto k = static_cast<Eigen::Index>(n);
    const MatX b = MatX::Random(k, k);
    m.M0 = 0.1 * b * b.transpose();
  }
  return m;
}

std::vector<RobotModel> reference_models() { return {reference_stewart_geometry(), reference_pulley_geometry()}; }

Pose near_home() { return random_pose_near(0.5, 0.2); }

}  // namespace

TEST_CASE("kinetic energy from the mass matrix") {
  for (const RobotModel& model : reference_models()) {
    for (int n = 0; n < 50; ++n) {
      const MassModel mass = random_mass(model.actuator_count(), true);
      const Pose e = near_home();
      const Twist phi(random_vdq());
      const Vec3 w = phi.angular();
      const Vec3 v = phi.linear();
      const VecX ldot = jacobian(model, e) * phi.screw().coeffs();
      const double expected = 0.5 * mass.m_e * (v + w.cross(mass.r0)).squaredNorm() + 0.5 * w.dot(mass.M_e * w) +
                              0.5 * ldot.dot(mass.M0 * ldot);
      CHECK(kinetic_energy(mass, model, e, phi) == doctest::Approx(expected).epsilon(1e-13));
      const Mat6 m = effective_mass(mass, model, e);
      CHECK(max_abs(m - m.transpose()) < 1e-12);
      CHECK(Eigen::LLT<Mat6>(m).info() == Eigen::Success);
    }
  }
}

TEST_CASE("gravity term against finite differences of the potential") {
  for (int n = 0; n < 50; ++n) {
    const MassModel mass = random_mass(6, false);
    const Pose e = random_pose();
    const VectorDualQuaternion lv = gravity_wrench_term(mass, e);
    for (int i = 0; i < 6; ++i) {
      const double fd =
          fd_lie_oracle([&](const Pose& p) { return potential_energy(mass, p); }, e, VectorDualQuaternion::basis(i));
      CHECK(std::abs(fd - lv[i]) < 1e-7 * (1.0 + std::abs(lv[i])));
    }
  }
}

TEST_CASE("closed-form bias equals the general Lagrangian form") {
  for (const RobotModel& model : reference_models()) {
    CAPTURE(model.type_name());
    for (bool act : {false, true}) {
      for (int n = 0; n < 30; ++n) {
        const MassModel mass = random_mass(model.actuator_count(), act);
        const Pose e = near_home();
        const Twist phi(random_vdq(2.0));
        const VectorDualQuaternion closed = bias_wrench(mass, model, e, phi).screw();
        const EulerLagrangeBias el = euler_lagrange_bias(mass, model, e, phi);
        CHECK(max_abs(closed - el.total()) < 1e-10 * (1.0 + max_abs(closed)));
      }
    }
  }
}

TEST_CASE("static equilibrium under gravity") {
  MassModel mass;
  mass.m_e = 2.0;
  mass.g_fixed = Vec3(0, 0, -9.81);
  const RobotModel model = reference_stewart_geometry();
  const Wrench mu = bias_wrench(mass, model, Pose(), Twist());
  CHECK(max_abs(mu.torque()) == 0.0);
  CHECK(max_abs(mu.force() - Vec3(0, 0, 19.62)) < 1e-14);
  CHECK(max_abs(forward_dynamics(mass, model, Pose(), Twist(), mu)) < 1e-14);
  // the same pose rotated: gravity seen from the moving frame
  const Pose turned = Pose::from_rotation_translation(Quaternion(std::sqrt(0.5), std::sqrt(0.5), 0, 0), Vec3::Zero());
  CHECK(max_abs(bias_wrench(mass, model, turned, Twist()).force() - Vec3(0, 19.62, 0)) < 1e-13);
}

TEST_CASE("torque-free rigid body reduces to Euler's equations") {
  MassModel mass;
  mass.m_e = 3.0;
  mass.M_e = Vec3(1.0, 2.0, 3.5).asDiagonal();
  const RobotModel model = reference_pulley_geometry();
  for (int n = 0; n < 20; ++n) {
    const Vec3 w = random_vec3(3.0);
    const Twist phi = Twist::from_velocities(w, Vec3::Zero());
    const VectorDualQuaternion alpha = forward_dynamics(mass, model, near_home(), phi, Wrench());
    const Vec3 wdot = 2.0 * alpha.primary_vec();
    CHECK(max_abs(mass.M_e * wdot + w.cross(mass.M_e * w)) < 1e-12);
    CHECK(max_abs(alpha.dual_vec()) < 1e-12);
  }
}

TEST_CASE("inverse and forward dynamics agree") {
  for (const RobotModel& model : reference_models()) {
    for (int n = 0; n < 20; ++n) {
      const MassModel mass = random_mass(model.actuator_count(), true);
      const Pose e = near_home();
      const Twist phi(random_vdq());
      const VectorDualQuaternion alpha = random_vdq();
      const DynamicsTerms d = dynamics_terms(mass, model, e, phi);
      const Wrench tau = Wrench::from_screw(d.mu + VectorDualQuaternion(Vec6(d.M * alpha.coeffs())));
      CHECK(max_abs(forward_dynamics(mass, model, e, phi, tau) - alpha) < 1e-11);
    }
  }
}

TEST_CASE("actuator curvature and no-load forces") {
  // With phi constant in the moving frame, eta(t) = eta0 exp(t phi), so l_ddot = phi^T T phi.
  for (const RobotModel& model : reference_models()) {
    const MassModel mass = random_mass(model.actuator_count(), true);
    const Pose e = near_home();
    const VectorDualQuaternion phi = random_vdq(0.5);
    const double h = 1e-4;
    const VecX l_ddot = (ik_lengths(model, e * dq_exp(h * phi)) - 2.0 * ik_lengths(model, e) +
                         ik_lengths(model, e * dq_exp(-h * phi))) /
                        (h * h);
    const DynamicsTerms d = dynamics_terms(mass, model, e, Twist(phi));
    CHECK(max_abs(d.curvature - l_ddot) < 1e-5);
    CHECK(max_abs(no_load_forces(mass, model, e, Twist(phi), VectorDualQuaternion()) - mass.M0 * l_ddot) < 1e-4);
  }
  MassModel none;
  CHECK(max_abs(no_load_forces(none, reference_pulley_geometry(), Pose(), Twist(random_vdq()), random_vdq())) == 0.0);
}

TEST_CASE("mass model validation") {
  const RobotModel model = reference_stewart_geometry();
  MassModel m;
  CHECK_NOTHROW(m.validate(6));
  m.m_e = 0.0;
  CHECK_THROWS_AS(m.validate(6), DomainError);
  m = {};
  m.M_e = Vec3(1, -1, 1).asDiagonal();
  CHECK_THROWS_AS(m.validate(6), DomainError);
  m = {};
  m.M0 = MatX::Identity(5, 5);
  CHECK_THROWS_AS(effective_mass(m, model, Pose()), DomainError);
  m.M0 = -MatX::Identity(6, 6);
  CHECK_THROWS_AS(m.validate(6), DomainError);
  m = {};
  CHECK_THROWS_AS(bias_wrench(m, model, Pose(), Twist(random_vdq(), Frame::fixed)), DomainError);
}

TEST_CASE("precession torque") {
  MassModel mass;
  mass.M_e = Vec3(1, 2, 3).asDiagonal();
  mass.m_e = 1.0;
  const Twist phi = Twist::from_velocities(Vec3(1, 1, 1), Vec3::Zero());
  const Wrench mu = bias_wrench(mass, reference_stewart_geometry(), Pose(), phi);
  // screw torque part 2 w x (M_e w) = 2 (i - 2j + k)
  CHECK(max_abs(mu.screw().primary_vec() - 2.0 * Vec3(1, -2, 1)) < 1e-15);
}

TEST_CASE("mu2 duality") {
  for (const RobotModel& model : reference_models()) {
    for (int n = 0; n < 50; ++n) {
      const MassModel mass = random_mass(model.actuator_count(), true);
      const Pose e = near_home();
      const Twist phi(random_vdq());
      const VectorDualQuaternion psi = random_vdq();
      const VectorDualQuaternion mu2 = euler_lagrange_bias(mass, model, e, phi).mu2;
      const Vec6 m_phi = effective_mass(mass, model, e) * phi.screw().coeffs();
      const double rhs = 2.0 * m_phi.dot(screw_cross(psi, phi.screw()).coeffs());
      CHECK(std::abs(psi.coeffs().dot(mu2.coeffs()) - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}
