#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "dqlie/kinsolve.hpp"
#include "support.hpp"

using namespace dqtest;

namespace {

constexpr double kCone = std::numbers::pi / 6;

Pose perturbed(const Pose& e, double fraction) {
  VectorDualQuaternion d = random_vdq();
  return e * normalize_one_plus((fraction / size(d)) * d);
}

}  // namespace

TEST_CASE("retraction") {
  const Pose e = random_pose();
  CHECK(retract(e, VectorDualQuaternion()) == e);
  for (int n = 0; n < 100; ++n) {
    const Pose r = retract(random_pose(), random_vdq(3.0));
    CHECK(max_abs(r.value().conj() * r.value() - DualQuaternion::identity()) < 1e-12);
  }
  // oversized steps are clamped to max_step
  const VectorDualQuaternion big = VectorDualQuaternion::from_parts(Vec3(3, 0, 0), Vec3::Zero());
  CHECK(retract(Pose(), big) == normalize_one_plus((0.5 / 3.0) * big));
  // agreement with eta exp(theta) to third order
  const VectorDualQuaternion t = random_vdq(0.1);
  const double d1 = size(retract(e, t).value() - (e * dq_exp(t)).value());
  const double d2 = size(retract(e, 0.5 * t).value() - (e * dq_exp(0.5 * t)).value());
  CHECK(d2 / d1 == doctest::Approx(0.125).epsilon(0.1));
}

TEST_CASE("settings validation") {
  SolveSettings s;
  CHECK_NOTHROW(s.validate());
  s.max_iters = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.max_step = 1.5;
  CHECK_THROWS_AS(s.validate(), DomainError);
  const RobotModel st = reference_stewart_geometry();
  CHECK_THROWS_AS(fk_exact(st, VecX::Ones(5), Pose()), DomainError);
  CHECK_THROWS_AS(fk_exact(reference_pulley_geometry(), VecX::Ones(8), Pose()), UnsupportedError);
}

TEST_CASE("exact solver") {
  const RobotModel st = reference_stewart_geometry();
  SUBCASE("starting at the answer") {
    const Pose truth = random_pose_near(kCone, 0.2);
    const SolveReport r = fk_exact(st, ik_lengths(st, truth), truth);
    CHECK(r.converged);
    CHECK(r.step_sizes.front() < 1e-14);
    CHECK(max_abs(r.pose.value() - truth.canonical().value()) < 1e-14);
  }
  SUBCASE("random guesses") {
    SolveSettings s;
    s.record_iterates = true;
    for (int n = 0; n < 200; ++n) {
      const Pose truth = random_pose_near(kCone, 0.2);
      const VecX l = ik_lengths(st, truth);
      const SolveReport r = fk_exact(st, l, random_pose_near(kCone, 0.2), s);
      REQUIRE(r.converged);
      CHECK(r.residual_inf < 1e-10);
      CHECK(max_abs(r.pose.value() - truth.canonical().value()) < 1e-9);
      CHECK(r.pose.rotation().w >= 0.0);
      for (const Pose& it : r.iterates) {
        CHECK(max_abs(it.value().conj() * it.value() - DualQuaternion::identity()) < 1e-12);
      }
    }
  }
  SUBCASE("quadratic convergence") {
    const Pose truth = random_pose_near(kCone, 0.2);
    const SolveReport r = fk_exact(st, ik_lengths(st, truth), perturbed(truth, 0.2));
    // e_{k+1} / e_k^2 stays bounded while steps are above the rounding floor
    for (std::size_t k = 0; k + 1 < r.step_sizes.size(); ++k) {
      if (r.step_sizes[k + 1] < 1e-13) break;
      CHECK(r.step_sizes[k + 1] / (r.step_sizes[k] * r.step_sizes[k]) < 50.0);
    }
  }
  SUBCASE("double cover") {
    const Pose truth = random_pose_near(kCone, 0.2);
    const VecX l = ik_lengths(st, truth);
    const Pose g = random_pose_near(kCone, 0.2);
    const Pose g_neg = Pose::from_dual_quaternion(-g.value());
    const SolveReport a = fk_exact(st, l, g);
    const SolveReport b = fk_exact(st, l, g_neg);
    CHECK(a.pose == b.pose);
    CHECK(a.iterations == b.iterations);
  }
  SUBCASE("singular Lambda") {
    std::vector<StewartLeg> parallel;
    for (int k = 1; k <= 6; ++k) parallel.push_back({Vec3::Zero(), Vec3(0, 0, -k)});
    const RobotModel par = StewartModel(parallel);
    CHECK_THROWS_AS(fk_exact(par, ik_lengths(par, Pose()), Pose()), SingularityError);
  }
}

TEST_CASE("over-constrained solver") {
  const RobotModel pu = reference_pulley_geometry();
  SUBCASE("starting at the answer") {
    const Pose truth = random_pose_near(kCone, 0.2);
    const SolveReport r = fk_overconstrained(pu, ik_lengths(pu, truth), truth);
    CHECK(r.converged);
    CHECK(r.step_sizes.front() < 1e-14);
  }
  SUBCASE("warm starts") {
    for (int n = 0; n < 100; ++n) {
      const Pose truth = random_pose_near(kCone, 0.2);
      const SolveReport r = fk_overconstrained(pu, ik_lengths(pu, truth), perturbed(truth, 0.01));
      REQUIRE(r.converged);
      CHECK(r.residual_inf < 1e-10);
      CHECK(r.iterations <= 8);
    }
  }
  SUBCASE("first step descends") {
    SolveSettings one;
    one.max_iters = 1;
    for (int n = 0; n < 100; ++n) {
      const Pose truth = random_pose_near(kCone, 0.2);
      const VecX l = ik_lengths(pu, truth);
      const Pose g = perturbed(truth, 0.03);
      const SolveReport r = fk_overconstrained(pu, l, g, one);
      CHECK(r.final_loss < fk_loss(pu, l, g));
      // a short move along the step direction also descends
      SolveSettings tiny = one;
      tiny.max_step = 1e-4;
      CHECK(fk_overconstrained(pu, l, g, tiny).final_loss < fk_loss(pu, l, g));
    }
  }
  SUBCASE("Stewart through the least-squares path") {
    const RobotModel st = reference_stewart_geometry();
    const Pose truth = random_pose_near(kCone, 0.2);
    const SolveReport r = fk_overconstrained(st, ik_lengths(st, truth), perturbed(truth, 0.05));
    CHECK(r.converged);
  }
}

TEST_CASE("multistart") {
  const RobotModel pu = reference_pulley_geometry();
  SolveSettings s;
  s.max_restarts = 200;
  auto source = [] { return random_pose_near(kCone, 0.2); };
  for (int n = 0; n < 5; ++n) {
    const Pose truth = random_pose_near(kCone, 0.2);
    const SolveReport r = fk_multistart(pu, ik_lengths(pu, truth), s, source);
    CHECK(r.converged);
    CHECK(r.residual_inf < 1e-10);
  }
  // infeasible lengths: best-effort minimiser with a small but nonzero loss
  const Pose truth = random_pose_near(kCone, 0.2);
  VecX l = ik_lengths(pu, truth);
  VecX bump = VecX::Zero(l.size());
  bump[0] = 1e-3;
  l += bump;
  s.max_restarts = 20;
  const SolveReport r = fk_multistart(pu, l, s, source);
  CHECK_FALSE(r.converged);
  CHECK(r.final_loss > 1e-12);
  CHECK(r.final_loss <= 0.5 * 1e-6);
  CHECK(r.restarts == s.max_restarts - 1);
}
