#pragma once

// Forward kinematics by Newton-Raphson on unit dual quaternions.
//
// Each iteration takes a step theta in the Lie algebra and retracts with
// eta <- eta normalize(1 + theta). The exact-constrained solver (six actuators)
// solves Lambda theta = -(L(eta) - l); the over-constrained solver takes a Newton
// step on the loss b(eta) = |L(eta) - l|^2 / 2.

#include <functional>
#include <vector>

#include "dqlie/models.hpp"

namespace dqlie {

struct SolveSettings {
  double tol_step = 1e-16;  // size_l(eta_{k+1} - eta_k)
  double tol_loss = 1e-16;  // over-constrained acceptance, length^2
  int max_iters = 50;
  int max_restarts = 1000;
  CharacteristicLength l{};
  double cond_limit = 1e12;  // condition number of Lambda (exact) beyond which we refuse to step
  double max_step = 0.5;     // steps are scaled down to this size
  bool record_iterates = false;

  /// Throws DomainError unless every field is positive.
  void validate() const;
};

struct SolveReport {
  Pose pose;
  int iterations = 0;
  int restarts = 0;
  double final_step_size = 0.0;
  double final_loss = 0.0;
  double residual_inf = 0.0;  // |L(pose) - l|_inf
  bool converged = false;
  /// Stopped because steps ceased to shrink at the rounding floor rather than by tol_step.
  bool stopped_at_floor = false;
  std::vector<double> step_sizes;
  std::vector<Pose> iterates;  // only with settings.record_iterates
};

/// eta normalize(1 + theta), with theta scaled down to size max_step when larger.
Pose retract(const Pose& eta, const VectorDualQuaternion& theta, CharacteristicLength l = {}, double max_step = 0.5);

/// theta = -Lambda^-1 (L(eta) - l); six actuators.
SolveReport fk_exact(const RobotModel& model, const VecX& lengths, const Pose& guess, const SolveSettings& s = {});

/// theta = -H^-1 delta with delta = Lambda^T r, H = Lambda^T Lambda + sum_m r_m sym(T_m), r = L(eta) - l.
/// Falls back to Gauss-Newton (H = Lambda^T Lambda) when H is not positive definite.
SolveReport fk_overconstrained(const RobotModel& model, const VecX& lengths, const Pose& guess,
                               const SolveSettings& s = {});

/// Dispatches on the actuator count.
SolveReport fk_solve(const RobotModel& model, const VecX& lengths, const Pose& guess, const SolveSettings& s = {});

using GuessSource = std::function<Pose()>;

/// Repeats fk_solve from fresh guesses until one converges or max_restarts attempts
/// have been made; returns the converged report or the lowest-loss one.
SolveReport fk_multistart(const RobotModel& model, const VecX& lengths, const SolveSettings& s,
                          const GuessSource& guess_source);

/// b(eta) = |L(eta) - l|^2 / 2.
double fk_loss(const RobotModel& model, const VecX& lengths, const Pose& eta);

}  // namespace dqlie
