#pragma once

// Simulation and verification: RK4 pose-path integration, three-way energy
// accounting, random poses, and forward-kinematics benchmark campaigns.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dqlie/dynamics.hpp"
#include "dqlie/kinsolve.hpp"
#include "dqlie/screws.hpp"

namespace dqlie {

struct SimState {
  Pose eta;
  Twist phi;  // moving frame
  double t = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<SimState> states;  // states[k].t = t0 + k dt
};

/// Applied wrench (moving frame) as a function of time and state. Gravity is
/// handled by the mass model and must not be included here.
using WrenchSchedule = std::function<Wrench(double t, const Pose& eta, const Twist& phi)>;

WrenchSchedule zero_wrench();
/// tau = Lambda^T f(t): the wrench produced by prescribed actuator forces.
WrenchSchedule actuator_force_schedule(const RobotModel& model, std::function<VecX(double)> forces);
/// Holds the end effector against gravity and adds amplitude * sin(2 pi freq t).
WrenchSchedule gravity_hold_schedule(const MassModel& mass, const Wrench& amplitude, double freq);

/// Classical RK4 on (eta, phi) with eta_dot = eta phi and phi_dot from forward_dynamics
/// (evaluated at the normalized stage pose). eta is renormalized after each step.
Trajectory integrate(const MassModel& mass, const RobotModel& model, const WrenchSchedule& schedule,
                     const SimState& state0, double dt, double t_end);

/// Cumulative work three ways, sampled at every trajectory state:
///   work_twist     = int tau . phi dt
///   work_actuator  = int f . l_dot dt, f = (Lambda^T)^+ tau
///   energy_change  = (KE + PE)(t) - (KE + PE)(t0)
/// The integrals use the integrator's own RK4 stage values and weights.
struct EnergyAudit {
  std::vector<double> t;
  std::vector<double> work_twist;
  std::vector<double> work_actuator;
  std::vector<double> energy_change;

  /// max_k |x_k - y_k| / max_k max(|x_k|, |y_k|) over the pair with the largest discrepancy.
  double max_relative_discrepancy() const;
  /// Largest per-step |increment(work_twist) - increment(work_actuator)|.
  double max_step_gap_twist_actuator() const;
};

EnergyAudit energy_audit(const Trajectory& traj, const MassModel& mass, const RobotModel& model,
                         const WrenchSchedule& schedule);

struct TrialConfig {
  int pose_count = 1000;
  double max_angle = 0.5235987755982988;  // 30 degrees
  Vec3 translation_box = Vec3::Constant(0.2);  // half-extents; translation uniform in [-b, b]
  std::uint64_t seed = 1;
  double warm_start_perturbation = 0.0;  // 0 means random (cold) guesses with restarts
  int threads = 0;                       // 0 means hardware concurrency

  void validate() const;
};

/// Uniform axis, angle uniform in [0, max_angle], translation uniform in the box.
Pose random_pose(const TrialConfig& cfg, std::mt19937_64& rng);
/// eta normalize(1 + theta) with theta in a uniformly random direction and size_l(theta) = fraction.
Pose perturb_pose(const Pose& eta, double fraction, std::mt19937_64& rng, CharacteristicLength l = {});

struct CampaignStats {
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;  // over successful trials
  double mean_restarts = 0.0;    // over successful trials
  double max_restarts = 0.0;
  double mean_wall_time_us = 0.0;
  double max_residual = 0.0;     // over successful trials, |L(pose) - l|_inf
};

/// Runs ik_lengths on random truth poses and solves back. Trial i draws from its own
/// stream seeded with (cfg.seed, i), so results do not depend on the thread count.
CampaignStats fk_campaign(const RobotModel& model, const TrialConfig& cfg, const SolveSettings& settings = {});

/// A smooth closed-form pose path whose consecutive poses differ by about `step_size` in size.
std::vector<Pose> smooth_path(int steps, double step_size, double max_angle = 0.4, double box = 0.15);

struct TrackingStats {
  int steps = 0;
  int failures = 0;
  double mean_iterations = 0.0;
  double max_residual = 0.0;
  double mean_pose_step = 0.0;
};

/// Solves along `path`, warm-starting every solve from the previous solution.
TrackingStats fk_tracking(const RobotModel& model, const std::vector<Pose>& path, const SolveSettings& settings = {});

}  // namespace dqlie
