#include "dqlie/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dqlie/acceptance.hpp"
#include "dqlie/io.hpp"

namespace dqlie {

namespace {

using nlohmann::json;

// Thrown for a failed solve/audit/check after its report has been written.
struct Failure {};

RobotDescription load_robot(const std::string& path) { return parse_robot(read_file(path), path); }

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw DomainError("cannot write " + out_path);
  f << text << "\n";
}

std::string dump(const json& j) { return j.dump(2); }

struct FkOptions {
  std::string robot;
  std::string lengths;
  std::string guess = "identity";
  std::uint64_t seed = 1;
  double tol = SolveSettings{}.tol_step;
  int max_restarts = 0;
  int max_iters = SolveSettings{}.max_iters;
  std::string out;
};

int cmd_ik(const std::string& robot_path, const std::string& pose_path, const std::string& out_path,
           std::ostream& out) {
  const RobotDescription robot = load_robot(robot_path);
  const Pose eta = parse_pose(read_file(pose_path), pose_path);
  emit(lengths_to_json(ik_lengths(robot.model, eta)), out_path, out);
  return 0;
}

int cmd_fk(const FkOptions& o, std::ostream& out) {
  const RobotDescription robot = load_robot(o.robot);
  const std::vector<VecX> series = parse_lengths(read_file(o.lengths), o.lengths);
  const auto n = static_cast<Eigen::Index>(robot.model.actuator_count());
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].size() != n) {
      throw ParseError(o.lengths + ": entry " + std::to_string(i) + " has " + std::to_string(series[i].size()) +
                       " lengths, the robot has " + std::to_string(n) + " actuators");
    }
  }

  SolveSettings s;
  s.tol_step = o.tol;
  s.max_iters = o.max_iters;
  s.max_restarts = 1 + std::max(o.max_restarts, 0);
  s.l = robot.l;
  s.validate();

  std::mt19937_64 rng(o.seed);
  TrialConfig cfg;
  auto random_guess = [&] { return random_pose(cfg, rng); };

  Pose fixed_guess;
  const bool previous = o.guess == "previous";
  if (o.guess != "identity" && o.guess != "random" && !previous) fixed_guess = parse_pose(read_file(o.guess), o.guess);

  Pose last;
  bool all_converged = true;
  json solutions = json::array();
  for (const VecX& lengths : series) {
    Pose first = fixed_guess;
    if (o.guess == "random") first = random_guess();
    if (previous) first = last;
    // The first attempt uses the requested guess; restarts draw random poses.
    bool used_first = false;
    const SolveReport r = fk_multistart(robot.model, lengths, s, [&]() -> Pose {
      if (!used_first) {
        used_first = true;
        return first;
      }
      return random_guess();
    });
    all_converged = all_converged && r.converged;
    if (r.converged) last = r.pose;
    solutions.push_back(json::parse(report_to_json(r)));
  }
  emit(dump(series.size() == 1 ? solutions[0] : json{{"solutions", solutions}}), o.out, out);
  if (!all_converged) throw Failure{};
  return 0;
}

struct SimOptions {
  std::string robot;
  std::string initial;
  std::string schedule;
  double dt = 1e-3;
  double t_end = 1.0;
  std::string out;
};

const MassModel& require_mass(const RobotDescription& robot, const std::string& path) {
  if (!robot.mass) throw ParseError(path + ": mass: missing field (needed for dynamics)");
  return *robot.mass;
}

WrenchSchedule load_schedule(const std::string& path, const RobotDescription& robot) {
  return path.empty() ? zero_wrench() : parse_schedule(read_file(path), robot, path);
}

int cmd_simulate(const SimOptions& o, std::ostream& out) {
  const RobotDescription robot = load_robot(o.robot);
  const MassModel& mass = require_mass(robot, o.robot);
  const SimState s0 = o.initial.empty() ? SimState{} : parse_initial_state(read_file(o.initial), o.initial);
  if (!(o.dt > 0.0) || !(o.t_end >= s0.t)) throw DomainError("need dt > 0 and t-end >= the initial time");
  const WrenchSchedule sched = load_schedule(o.schedule, robot);
  const Trajectory traj = integrate(mass, robot.model, sched, s0, o.dt, o.t_end);
  const EnergyAudit audit = energy_audit(traj, mass, robot.model, sched);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, &audit);
  std::string text = csv.str();
  text.pop_back();  // emit adds the final newline
  emit(text, o.out, out);
  return 0;
}

struct AuditOptions {
  std::string robot;
  std::string trajectory;
  std::string schedule;
  double tol = 1e-6;
};

int cmd_audit(const AuditOptions& o, std::ostream& out) {
  const RobotDescription robot = load_robot(o.robot);
  const MassModel& mass = require_mass(robot, o.robot);
  std::ifstream f(o.trajectory);
  if (!f) throw ParseError(o.trajectory + ": cannot open file");
  const Trajectory traj = read_trajectory_csv(f, o.trajectory);
  if (traj.states.size() < 2) throw ParseError(o.trajectory + ": need at least two states");
  const EnergyAudit a = energy_audit(traj, mass, robot.model, load_schedule(o.schedule, robot));
  const double d = a.max_relative_discrepancy();
  const bool ok = d <= o.tol;
  json j;
  j["steps"] = traj.states.size() - 1;
  j["dt"] = traj.dt;
  j["work_twist"] = a.work_twist.back();
  j["work_actuator"] = a.work_actuator.back();
  j["energy_change"] = a.energy_change.back();
  j["max_relative_discrepancy"] = d;
  j["max_step_gap_twist_actuator"] = a.max_step_gap_twist_actuator();
  j["tolerance"] = o.tol;
  j["passed"] = ok;
  out << dump(j) << "\n";
  if (!ok) throw Failure{};
  return 0;
}

struct BenchOptions {
  std::string robot;
  int count = 1000;
  double max_angle_deg = 30.0;
  double box = 0.2;
  std::uint64_t seed = 1;
  double perturbation = 0.0;
  int threads = 0;
  int max_restarts = SolveSettings{}.max_restarts;
  std::string out;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const RobotDescription robot = load_robot(o.robot);
  TrialConfig cfg;
  cfg.pose_count = o.count;
  cfg.max_angle = o.max_angle_deg * std::numbers::pi / 180.0;
  cfg.translation_box = Vec3::Constant(o.box);
  cfg.seed = o.seed;
  cfg.warm_start_perturbation = o.perturbation;
  cfg.threads = o.threads;
  cfg.validate();
  SolveSettings s;
  s.l = robot.l;
  s.max_restarts = o.max_restarts;
  emit(stats_to_json(fk_campaign(robot.model, cfg, s), cfg), o.out, out);
  return 0;
}

int cmd_check(bool full, std::uint64_t seed, std::ostream& out) {
  AcceptanceOptions opts;
  opts.scale = full ? 1.0 : 0.05;
  opts.seed = seed;
  bool ok = true;
  run_acceptance(opts, [&](const CriterionResult& r) {
    out << format_result(r) << "\n" << std::flush;
    ok = ok && r.passed;
  });
  if (!ok) throw Failure{};
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-quaternion kinematics and dynamics for parallel robots", "dqlie"};
  app.require_subcommand(1);

  std::string robot;
  std::string pose;
  std::string out_path;
  auto* ik = app.add_subcommand("ik", "Actuator lengths for a pose");
  ik->add_option("--robot", robot, "Robot description JSON")->required();
  ik->add_option("--pose", pose, "Pose JSON")->required();
  ik->add_option("--out", out_path, "Write the result here instead of stdout");

  FkOptions fk_o;
  auto* fk = app.add_subcommand("fk", "Pose for actuator lengths (Newton-Raphson)");
  fk->add_option("--robot", fk_o.robot, "Robot description JSON")->required();
  fk->add_option("--lengths", fk_o.lengths, "Lengths JSON (single or series)")->required();
  fk->add_option("--guess", fk_o.guess, "identity, random, previous, or a pose JSON path");
  fk->add_option("--seed", fk_o.seed, "Seed for random guesses");
  fk->add_option("--tol", fk_o.tol, "Step-size tolerance");
  fk->add_option("--max-iters", fk_o.max_iters, "Iterations per attempt");
  fk->add_option("--max-restarts", fk_o.max_restarts, "Random restarts after the first attempt fails");
  fk->add_option("--out", fk_o.out, "Write the result here instead of stdout");

  SimOptions sim_o;
  auto* sim = app.add_subcommand("simulate", "Integrate the equations of motion; writes CSV");
  sim->add_option("--robot", sim_o.robot, "Robot description JSON with a mass block")->required();
  sim->add_option("--initial", sim_o.initial, "Initial state JSON (default: identity at rest)");
  sim->add_option("--schedule", sim_o.schedule, "Applied wrench schedule JSON (default: zero)");
  sim->add_option("--dt", sim_o.dt, "Time step [s]");
  sim->add_option("--t-end", sim_o.t_end, "End time [s]");
  sim->add_option("--out", sim_o.out, "Write the CSV here instead of stdout");

  AuditOptions au_o;
  auto* audit = app.add_subcommand("audit-energy", "Compare work and energy along a trajectory");
  audit->add_option("--robot", au_o.robot, "Robot description JSON with a mass block")->required();
  audit->add_option("--trajectory", au_o.trajectory, "Trajectory CSV")->required();
  audit->add_option("--schedule", au_o.schedule, "Schedule JSON used for the trajectory (default: zero)");
  audit->add_option("--tol", au_o.tol, "Relative discrepancy tolerance");

  BenchOptions b_o;
  auto* bench = app.add_subcommand("bench-fk", "Forward-kinematics campaign on random poses");
  bench->add_option("--robot", b_o.robot, "Robot description JSON")->required();
  bench->add_option("--count", b_o.count, "Number of poses");
  bench->add_option("--max-angle", b_o.max_angle_deg, "Largest rotation angle [deg]");
  bench->add_option("--box", b_o.box, "Translation half-extent [m]");
  bench->add_option("--seed", b_o.seed, "Campaign seed");
  bench->add_option("--perturbation", b_o.perturbation, "Warm-start perturbation size (0: cold multistart)");
  bench->add_option("--threads", b_o.threads, "Worker threads (0: all cores)");
  bench->add_option("--max-restarts", b_o.max_restarts, "Restarts allowed for cold starts");
  bench->add_option("--out", b_o.out, "Write the result here instead of stdout");

  bool full = false;
  std::uint64_t check_seed = AcceptanceOptions{}.seed;
  auto* check = app.add_subcommand("check", "Run the acceptance criteria (scaled down unless --full)");
  check->add_flag("--full", full, "Full sample counts and runtime limits");
  check->add_option("--seed", check_seed, "Seed for random samples");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "dqlie: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ik) return cmd_ik(robot, pose, out_path, out);
    if (*fk) return cmd_fk(fk_o, out);
    if (*sim) return cmd_simulate(sim_o, out);
    if (*audit) return cmd_audit(au_o, out);
    if (*bench) return cmd_bench(b_o, out);
    if (*check) return cmd_check(full, check_seed, out);
  } catch (const Failure&) {
    return 1;
  } catch (const std::exception& e) {
    err << "dqlie: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dqlie
