#include "dqlie/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

namespace dqlie {

namespace {

struct Derivative {
  DualQuaternion eta_dot;
  VectorDualQuaternion alpha;
};

/// What a single RK stage saw; used by the energy audit.
struct Stage {
  double t;
  Pose eta;
  VectorDualQuaternion phi;
  Wrench tau;
};

template <class Observer>
std::pair<DualQuaternion, VectorDualQuaternion> rk4_step(const MassModel& mass, const RobotModel& model,
                                                         const WrenchSchedule& schedule, double t,
                                                         const DualQuaternion& eta, const VectorDualQuaternion& phi,
                                                         double h, Observer&& observe) {
  auto f = [&](double ts, const DualQuaternion& e, const VectorDualQuaternion& p, double weight) {
    const Pose unit = normalize(e);
    const Twist tw(p);
    const Wrench tau = schedule(ts, unit, tw);
    observe(Stage{ts, unit, p, tau}, weight);
    return Derivative{e * p.to_dq(), forward_dynamics(mass, model, unit, tw, tau)};
  };
  const Derivative k1 = f(t, eta, phi, 1.0);
  const Derivative k2 = f(t + 0.5 * h, eta + (0.5 * h) * k1.eta_dot, phi + (0.5 * h) * k1.alpha, 2.0);
  const Derivative k3 = f(t + 0.5 * h, eta + (0.5 * h) * k2.eta_dot, phi + (0.5 * h) * k2.alpha, 2.0);
  const Derivative k4 = f(t + h, eta + h * k3.eta_dot, phi + h * k3.alpha, 1.0);
  const double w = h / 6.0;
  return {eta + w * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot),
          phi + w * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha)};
}

double total_energy(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi) {
  return kinetic_energy(mass, model, eta, phi) + potential_energy(mass, eta);
}

/// Actuator forces f with Lambda^T f = tau and minimum norm.
VecX actuator_forces(const MatX6& lam, const Wrench& tau) {
  const Mat6 g = lam.transpose() * lam;
  return lam * Eigen::LDLT<Mat6>(g).solve(tau.screw().coeffs());
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v(n(rng), n(rng), n(rng));
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

}  // namespace

WrenchSchedule zero_wrench() {
  return [](double, const Pose&, const Twist&) { return Wrench(); };
}

WrenchSchedule actuator_force_schedule(const RobotModel& model, std::function<VecX(double)> forces) {
  return [model, forces = std::move(forces)](double t, const Pose& eta, const Twist&) {
    return force_to_wrench(model, eta, forces(t));
  };
}

WrenchSchedule gravity_hold_schedule(const MassModel& mass, const Wrench& amplitude, double freq) {
  return [mass, amplitude, freq](double t, const Pose& eta, const Twist&) {
    const VectorDualQuaternion hold = gravity_wrench_term(mass, eta);
    const double s = std::sin(2.0 * std::numbers::pi * freq * t);
    return Wrench::from_screw(hold + s * amplitude.screw());
  };
}

Trajectory integrate(const MassModel& mass, const RobotModel& model, const WrenchSchedule& schedule,
                     const SimState& state0, double dt, double t_end) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(t_end >= state0.t)) throw DomainError("t_end must not precede the initial time");
  if (state0.phi.frame() != Frame::moving) throw DomainError("initial twist must be in the moving frame");
  mass.validate(model.actuator_count());
  const auto steps = static_cast<long>(std::llround((t_end - state0.t) / dt));
  Trajectory out;
  out.dt = dt;
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  out.states.push_back(state0);
  DualQuaternion eta = state0.eta.value();
  VectorDualQuaternion phi = state0.phi.screw();
  for (long k = 0; k < steps; ++k) {
    const double t = state0.t + static_cast<double>(k) * dt;
    auto [e, p] = rk4_step(mass, model, schedule, t, eta, phi, dt, [](const Stage&, double) {});
    const Pose unit = normalize(e);
    eta = unit.value();
    phi = p;
    out.states.push_back({unit, Twist(phi), state0.t + static_cast<double>(k + 1) * dt});
  }
  return out;
}

EnergyAudit energy_audit(const Trajectory& traj, const MassModel& mass, const RobotModel& model,
                         const WrenchSchedule& schedule) {
  EnergyAudit a;
  if (traj.states.empty()) return a;
  const SimState& s0 = traj.states.front();
  const double e0 = total_energy(mass, model, s0.eta, s0.phi);
  a.t.push_back(s0.t);
  a.work_twist.push_back(0.0);
  a.work_actuator.push_back(0.0);
  a.energy_change.push_back(0.0);
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const SimState& s = traj.states[k];
    double wt = 0.0;
    double wa = 0.0;
    rk4_step(mass, model, schedule, s.t, s.eta.value(), s.phi.screw(), traj.dt, [&](const Stage& st, double weight) {
      const MatX6 lam = jacobian(model, st.eta);
      wt += weight * work_rate(st.tau, Twist(st.phi));
      wa += weight * actuator_forces(lam, st.tau).dot(lam * st.phi.coeffs());
    });
    const SimState& n = traj.states[k + 1];
    a.t.push_back(n.t);
    a.work_twist.push_back(a.work_twist.back() + traj.dt / 6.0 * wt);
    a.work_actuator.push_back(a.work_actuator.back() + traj.dt / 6.0 * wa);
    a.energy_change.push_back(total_energy(mass, model, n.eta, n.phi) - e0);
  }
  return a;
}

double EnergyAudit::max_relative_discrepancy() const {
  auto rel = [](const std::vector<double>& x, const std::vector<double>& y) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      diff = std::max(diff, std::abs(x[k] - y[k]));
      scale = std::max({scale, std::abs(x[k]), std::abs(y[k])});
    }
    return scale > 0.0 ? diff / scale : diff;
  };
  return std::max({rel(work_twist, work_actuator), rel(work_twist, energy_change), rel(work_actuator, energy_change)});
}

double EnergyAudit::max_step_gap_twist_actuator() const {
  double gap = 0.0;
  for (std::size_t k = 1; k < work_twist.size(); ++k) {
    const double dt_work = work_twist[k] - work_twist[k - 1];
    const double da_work = work_actuator[k] - work_actuator[k - 1];
    gap = std::max(gap, std::abs(dt_work - da_work));
  }
  return gap;
}

void TrialConfig::validate() const {
  if (pose_count < 0) throw DomainError("pose_count must be non-negative");
  if (!(max_angle > 0.0 && max_angle <= std::numbers::pi)) throw DomainError("max_angle must lie in (0, pi]");
  if (!translation_box.allFinite() || translation_box.minCoeff() < 0.0) {
    throw DomainError("translation_box extents must be non-negative");
  }
  if (!(warm_start_perturbation >= 0.0 && warm_start_perturbation < 1.0)) {
    throw DomainError("warm_start_perturbation must lie in [0, 1)");
  }
  if (threads < 0) throw DomainError("threads must be non-negative");
}

Pose random_pose(const TrialConfig& cfg, std::mt19937_64& rng) {
  const Vec3 axis = random_unit(rng);
  std::uniform_real_distribution<double> angle(0.0, cfg.max_angle);
  const double th = angle(rng);
  Vec3 t;
  for (int i = 0; i < 3; ++i) {
    const double b = cfg.translation_box[i];
    t[i] = b > 0.0 ? std::uniform_real_distribution<double>(-b, b)(rng) : 0.0;
  }
  return Pose::from_rotation_translation(rotation_quaternion(axis, th), t);
}

Pose perturb_pose(const Pose& eta, double fraction, std::mt19937_64& rng, CharacteristicLength l) {
  if (fraction == 0.0) return eta;
  std::normal_distribution<double> n(0.0, 1.0);
  Vec6 c;
  for (int i = 0; i < 6; ++i) c[i] = n(rng);
  const VectorDualQuaternion d(c);
  return eta * normalize_one_plus((fraction / size(d, l)) * d, l);
}

CampaignStats fk_campaign(const RobotModel& model, const TrialConfig& cfg, const SolveSettings& settings) {
  cfg.validate();
  settings.validate();
  struct Result {
    bool ok = false;
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0;
    double micros = 0.0;
  };
  const auto count = static_cast<std::size_t>(cfg.pose_count);
  std::vector<Result> results(count);

  auto run_trial = [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    const Pose truth = random_pose(cfg, rng);
    const VecX lengths = ik_lengths(model, truth);
    Result r;
    const auto start = std::chrono::steady_clock::now();
    try {
      SolveReport rep;
      if (cfg.warm_start_perturbation > 0.0) {
        rep = fk_solve(model, lengths, perturb_pose(truth, cfg.warm_start_perturbation, rng, settings.l), settings);
      } else {
        rep = fk_multistart(model, lengths, settings, [&] { return random_pose(cfg, rng); });
      }
      r.ok = rep.converged;
      r.iterations = rep.iterations;
      r.restarts = rep.restarts;
      r.residual = rep.residual_inf;
    } catch (const GeometryError&) {
    } catch (const SingularityError&) {
    }
    r.micros = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    results[i] = r;
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) run_trial(i);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignStats s;
  s.trials = cfg.pose_count;
  double time = 0.0;
  for (const Result& r : results) {
    time += r.micros;
    if (!r.ok) continue;
    ++s.successes;
    s.mean_iterations += r.iterations;
    s.mean_restarts += r.restarts;
    s.max_restarts = std::max(s.max_restarts, static_cast<double>(r.restarts));
    s.max_residual = std::max(s.max_residual, r.residual);
  }
  if (s.trials > 0) {
    s.success_rate = static_cast<double>(s.successes) / s.trials;
    s.mean_wall_time_us = time / s.trials;
  }
  if (s.successes > 0) {
    s.mean_iterations /= s.successes;
    s.mean_restarts /= s.successes;
  }
  return s;
}

std::vector<Pose> smooth_path(int steps, double step_size, double max_angle, double box) {
  if (steps < 1 || !(step_size > 0.0)) throw DomainError("smooth_path needs steps >= 1 and a positive step size");
  // Incommensurate frequencies so the path does not retrace itself.
  auto at = [&](double s) {
    const Vec3 axis = Vec3(std::sin(0.7 * s), std::cos(1.1 * s), 0.5 + 0.5 * std::sin(0.3 * s)).normalized();
    const double th = max_angle * std::sin(0.9 * s);
    const Vec3 t = box * Vec3(std::sin(1.3 * s), std::sin(0.8 * s + 1.0), std::sin(0.5 * s + 2.0));
    return Pose::from_rotation_translation(rotation_quaternion(axis, th), t);
  };
  // Calibrate the parameter rate on a coarse pass so the mean step matches step_size.
  const double probe = 1e-3;
  double mean = 0.0;
  const int samples = 1000;
  for (int k = 0; k < samples; ++k) {
    const double s = 0.01 * k;
    mean += size(at(s + probe).value() - at(s).value()) / probe;
  }
  mean /= samples;
  const double ds = step_size / mean;
  std::vector<Pose> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) path.push_back(at(ds * k));
  return path;
}

TrackingStats fk_tracking(const RobotModel& model, const std::vector<Pose>& path, const SolveSettings& settings) {
  TrackingStats st;
  if (path.empty()) return st;
  Pose prev = path.front();
  for (std::size_t k = 1; k < path.size(); ++k) {
    const VecX lengths = ik_lengths(model, path[k]);
    ++st.steps;
    st.mean_pose_step += size(path[k].value() - path[k - 1].value());
    try {
      const SolveReport rep = fk_solve(model, lengths, prev, settings);
      st.mean_iterations += rep.iterations;
      st.max_residual = std::max(st.max_residual, rep.residual_inf);
      if (!rep.converged) {
        ++st.failures;
        prev = path[k];  // resynchronise so one failure is not counted repeatedly
        continue;
      }
      prev = rep.pose;
    } catch (const GeometryError&) {
      ++st.failures;
      prev = path[k];
    } catch (const SingularityError&) {
      ++st.failures;
      prev = path[k];
    }
  }
  st.mean_iterations /= st.steps;
  st.mean_pose_step /= st.steps;
  return st;
}

}  // namespace dqlie
