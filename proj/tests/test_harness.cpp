#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dqlie/harness.hpp"
#include "support.hpp"

using namespace dqtest;

namespace {

MassModel tumbler() {
  MassModel m;
  m.m_e = 2.0;
  m.M_e = Vec3(1, 2, 3).asDiagonal();
  return m;
}

Vec3 world_angular_momentum(const MassModel& m, const SimState& s) {
  // about the world origin: c x P + Q (M_e w) Q*
  const Vec3 w = s.phi.angular();
  const Vec3 p = m.m_e * s.eta.rotate(s.phi.linear() + w.cross(m.r0));
  return s.eta.apply(m.r0).cross(p) + s.eta.rotate(m.M_e * w);
}

Vec3 world_linear_momentum(const MassModel& m, const SimState& s) {
  return m.m_e * s.eta.rotate(s.phi.linear() + s.phi.angular().cross(m.r0));
}

}  // namespace

TEST_CASE("stationary and uniform motion") {
  const RobotModel model = reference_stewart_geometry();
  MassModel m = tumbler();
  const Trajectory still = integrate(m, model, zero_wrench(), SimState{}, 0.01, 0.5);
  REQUIRE(still.states.size() == 51);
  for (const SimState& s : still.states) CHECK(s.eta == Pose());

  // eta(t) = eta0 exp(t phi) with phi a pure translation: position grows linearly
  const Vec3 v(0.1, -0.05, 0.02);
  const SimState s0{Pose(), Twist::from_velocities(Vec3::Zero(), v), 0.0};
  const Trajectory line = integrate(m, model, zero_wrench(), s0, 0.01, 1.0);
  for (const SimState& s : line.states) {
    CHECK(max_abs(s.eta.translation() - s.t * v) < 1e-12);
    CHECK(max_abs(s.phi.screw() - s0.phi.screw()) == 0.0);
  }
  CHECK_THROWS_AS(integrate(m, model, zero_wrench(), s0, 0.0, 1.0), DomainError);
}

TEST_CASE("torque-free tumble matches a direct Euler-equation integrator") {
  const MassModel m = tumbler();
  const Vec3 w0(0.3, 1.0, -0.4);
  const double dt = 1e-2;
  const Trajectory tr = integrate(m, reference_stewart_geometry(), zero_wrench(),
                                  SimState{Pose(), Twist::from_velocities(w0, Vec3::Zero()), 0.0}, dt, 2.0);
  auto rhs = [&](const Vec3& w) -> Vec3 { return m.M_e.inverse() * (-w.cross(m.M_e * w)); };
  Vec3 w = w0;
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const Vec3 k1 = rhs(w), k2 = rhs(w + 0.5 * dt * k1), k3 = rhs(w + 0.5 * dt * k2), k4 = rhs(w + dt * k3);
    w += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    CHECK(max_abs(tr.states[k].phi.angular() - w) < 1e-10);
  }
}

TEST_CASE("global error is fourth order") {
  const MassModel m = tumbler();
  const SimState s0{Pose(), Twist::from_velocities(Vec3(0.3, 1.0, -0.4), Vec3(0.1, 0, 0)), 0.0};
  auto end = [&](double dt) {
    return integrate(m, reference_stewart_geometry(), zero_wrench(), s0, dt, 1.0).states.back().eta.value();
  };
  const DualQuaternion a = end(0.1), b = end(0.05), c = end(0.025);
  const double ratio = size(a - b) / size(b - c);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("momentum conservation without external forces") {
  MassModel m = tumbler();
  m.r0 = Vec3(0.05, -0.1, 0.08);
  const SimState s0{Pose::from_rotation_translation(rotation_quaternion(Vec3(0.1, -0.3, 0.2).normalized(), 0.8), Vec3(0.1, 0, 0)),
                    Twist::from_velocities(Vec3(0.5, -1.2, 0.7), Vec3(0.2, 0.1, -0.3)), 0.0};
  const Trajectory tr = integrate(m, reference_stewart_geometry(), zero_wrench(), s0, 1e-3, 3.0);
  const Vec3 l0 = world_angular_momentum(m, tr.states.front());
  const Vec3 p0 = world_linear_momentum(m, tr.states.front());
  double drift = 0.0;
  double unit = 0.0;
  for (const SimState& s : tr.states) {
    drift = std::max({drift, max_abs(world_angular_momentum(m, s) - l0), max_abs(world_linear_momentum(m, s) - p0)});
    unit = std::max(unit, max_abs(s.eta.value().conj() * s.eta.value() - DualQuaternion::identity()));
  }
  CHECK(drift < 1e-9);
  CHECK(unit < 1e-12);
}

TEST_CASE("energy audit") {
  const RobotModel pu = reference_pulley_geometry();
  SUBCASE("free fall") {
    MassModel m = tumbler();
    m.g_fixed = Vec3(0, 0, -9.81);
    const Trajectory tr = integrate(m, pu, zero_wrench(), SimState{}, 1e-2, 0.3);
    const EnergyAudit a = energy_audit(tr, m, pu, zero_wrench());
    CHECK(max_abs(a.work_twist.back()) == 0.0);
    CHECK(std::abs(a.energy_change.back()) < 1e-12);
    // the body has fallen g t^2 / 2
    CHECK(tr.states.back().eta.translation().z() == doctest::Approx(-0.5 * 9.81 * 0.09).epsilon(1e-10));
  }
  SUBCASE("actuator-only drive: twist and actuator work agree step by step") {
    MassModel m = tumbler();
    m.M0 = 0.1 * MatX::Identity(8, 8);
    const WrenchSchedule drive = actuator_force_schedule(pu, [](double t) {
      VecX f(8);
      for (int k = 0; k < 8; ++k) f[k] = std::sin(3.0 * t + k);
      return f;
    });
    const Trajectory tr = integrate(m, pu, drive, SimState{}, 1e-2, 0.5);
    const EnergyAudit a = energy_audit(tr, m, pu, drive);
    CHECK(a.max_step_gap_twist_actuator() < 1e-12);
    CHECK(a.max_relative_discrepancy() < 1e-6);
  }
  SUBCASE("convergence under dt halving") {
    MassModel m = tumbler();
    m.r0 = Vec3(0.01, -0.02, 0.03);
    m.g_fixed = Vec3(0, 0, -9.81);
    m.M0 = 0.1 * MatX::Identity(8, 8);
    const Wrench amp(Vec3(0.3, -0.2, 0.1), Vec3(1.0, 0.5, -0.8));
    const WrenchSchedule drive = gravity_hold_schedule(m, amp, 1.0);
    std::vector<double> err;
    for (double dt : {0.05, 0.025, 0.0125}) {
      const Trajectory tr = integrate(m, pu, drive, SimState{}, dt, 1.0);
      const EnergyAudit a = energy_audit(tr, m, pu, drive);
      err.push_back(std::abs(a.work_twist.back() - a.energy_change.back()));
    }
    MESSAGE("audit errors " << err[0] << " " << err[1] << " " << err[2]);
    CHECK(std::log2(err[0] / err[1]) > 3.0);
    CHECK(std::log2(err[1] / err[2]) > 3.0);
  }
}

TEST_CASE("no-load forces along a simulated path") {
  const RobotModel pu = reference_pulley_geometry();
  MassModel m = tumbler();
  m.M0 = 0.1 * MatX::Identity(8, 8);
  const WrenchSchedule drive = gravity_hold_schedule(m, Wrench(Vec3(0.2, 0, 0.1), Vec3(0.5, -0.4, 0.3)), 2.0);
  const SimState s0{Pose(), Twist::from_velocities(Vec3(0.2, -0.1, 0.3), Vec3(0.05, 0.02, 0)), 0.0};
  std::vector<double> err;
  for (double dt : {4e-3, 2e-3}) {
    const Trajectory tr = integrate(m, pu, drive, s0, dt, 0.1);
    const std::size_t k = tr.states.size() / 2;
    auto ldot = [&](const SimState& s) -> VecX { return jacobian(pu, s.eta) * s.phi.screw().coeffs(); };
    const VecX fd = m.M0 * (ldot(tr.states[k + 1]) - ldot(tr.states[k - 1])) / (2 * dt);
    const SimState& s = tr.states[k];
    const VectorDualQuaternion alpha = forward_dynamics(m, pu, s.eta, s.phi, drive(s.t, s.eta, s.phi));
    err.push_back(max_abs(no_load_forces(m, pu, s.eta, s.phi, alpha) - fd));
  }
  CHECK(err[0] < 1e-4);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("random poses") {
  TrialConfig cfg;
  cfg.max_angle = 0.3;
  std::mt19937_64 r1(7), r2(7);
  for (int n = 0; n < 10000; ++n) {
    const Pose p = random_pose(cfg, r1);
    CHECK(rotation_angle(p.rotation()) <= cfg.max_angle + 1e-12);
    CHECK(max_abs(p.translation()) <= 0.2 + 1e-15);
    CHECK(p == random_pose(cfg, r2));
  }
  cfg.max_angle = 1e-300;
  cfg.translation_box = Vec3::Zero();
  CHECK(max_abs(random_pose(cfg, r1).value() - DualQuaternion::identity()) < 1e-15);
  cfg.max_angle = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);

  const Pose e = random_pose();
  const Pose q = perturb_pose(e, 0.01, r1);
  CHECK(size(e.inverse().value() * q.value() - DualQuaternion::identity()) == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("campaigns are deterministic and thread-independent") {
  const RobotModel st = reference_stewart_geometry();
  TrialConfig cfg;
  cfg.pose_count = 40;
  cfg.seed = 99;
  cfg.threads = 1;
  const CampaignStats a = fk_campaign(st, cfg);
  cfg.threads = 4;
  const CampaignStats b = fk_campaign(st, cfg);
  CHECK(a.successes == b.successes);
  CHECK(a.mean_iterations == b.mean_iterations);
  CHECK(a.mean_restarts == b.mean_restarts);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.success_rate == 1.0);
  cfg.warm_start_perturbation = 0.01;
  const CampaignStats warm = fk_campaign(reference_pulley_geometry(), cfg);
  CHECK(warm.success_rate == 1.0);
}

TEST_CASE("tracking along a smooth path") {
  const std::vector<Pose> path = smooth_path(500, 0.003);
  const TrackingStats st = fk_tracking(reference_pulley_geometry(), path);
  CHECK(st.mean_pose_step == doctest::Approx(0.003).epsilon(0.2));
  CHECK(st.failures == 0);
  CHECK(st.max_residual < 1e-8);
}
