#pragma once

// File formats: robot descriptions, poses and actuator lengths as JSON, and
// trajectories as CSV. Parse failures raise ParseError naming the source, and
// either the line/column (syntax) or the JSON field path (content).

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dqlie/harness.hpp"

namespace dqlie {

struct RobotDescription {
  RobotModel model;
  std::optional<MassModel> mass;
  CharacteristicLength l;
};

RobotDescription parse_robot(const std::string& text, const std::string& source = "<robot>");
std::string robot_to_json(const RobotDescription& robot);

/// {"pose": [8 components in basis order]} or {"rotation": [w, x, y, z], "translation": [3]}.
Pose parse_pose(const std::string& text, const std::string& source = "<pose>");
std::string pose_to_json(const Pose& pose);

/// {"lengths": [...]} for one solve or {"series": [[...], ...]} for a sequence.
std::vector<VecX> parse_lengths(const std::string& text, const std::string& source = "<lengths>");
std::string lengths_to_json(const VecX& lengths);

/// {"pose": [8], "twist": [6 screw coefficients]}; both optional.
SimState parse_initial_state(const std::string& text, const std::string& source = "<state>");

/// {"type": "zero"}
/// {"type": "gravity_hold", "torque": [3], "force": [3], "frequency": f}
/// {"type": "actuator_sine", "bias": [n], "amplitude": [n], "frequency": f}
WrenchSchedule parse_schedule(const std::string& text, const RobotDescription& robot,
                              const std::string& source = "<schedule>");

std::string report_to_json(const SolveReport& report);
std::string stats_to_json(const CampaignStats& stats, const TrialConfig& cfg);

/// Columns t, eta1..eta8, phi1..phi6 and, when an audit is given, work_twist,
/// work_actuator, energy_change. Numbers are printed with 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const EnergyAudit* audit = nullptr);
Trajectory read_trajectory_csv(std::istream& is, const std::string& source = "<trajectory>");

std::string read_file(const std::string& path);

}  // namespace dqlie
