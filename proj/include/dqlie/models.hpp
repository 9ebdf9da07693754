#pragma once

// Parallel-robot geometry: actuator lengths L(eta), the n x 6 matrix Lambda with
// Lambda(k, j) = L_j l_k, the second Lie tables L_i L_j l_k, and the force map
// T = Lambda^T. Ground-side data live in the fixed frame and are pulled back to
// the moving frame at each pose.

#include <string>
#include <variant>
#include <vector>

#include "dqlie/liecalc.hpp"
#include "dqlie/screws.hpp"

namespace dqlie {

using VecX = Eigen::VectorXd;
using MatX6 = Eigen::Matrix<double, Eigen::Dynamic, 6>;

/// Legs shorter than this, or pulley geometries with h1^2 + h2^2 - p^2 below
/// kMinPulleyClearance, are treated as degenerate.
inline constexpr double kMinLegLength = 1e-9;
inline constexpr double kMinPulleyClearance = 1e-12;

struct StewartLeg {
  Vec3 attachment;  // r, moving frame
  Vec3 anchor;      // s~, fixed frame
};

class StewartModel {
 public:
  explicit StewartModel(std::vector<StewartLeg> legs);
  const std::vector<StewartLeg>& legs() const { return legs_; }
  std::size_t size() const { return legs_.size(); }

 private:
  std::vector<StewartLeg> legs_;
};

/// Cable passing over a pulley whose assembly swivels about a fixed axis.
struct PulleyActuator {
  Vec3 axis;               // n~, unit, fixed frame
  Vec3 axis_point;         // x~, fixed frame
  double rod_offset = 0;   // w >= 0
  double pulley_radius = 0;  // p >= 0
  Vec3 attachment;         // r, moving frame
};

class PulleyModel {
 public:
  explicit PulleyModel(std::vector<PulleyActuator> actuators);
  const std::vector<PulleyActuator>& actuators() const { return actuators_; }
  std::size_t size() const { return actuators_.size(); }

 private:
  std::vector<PulleyActuator> actuators_;
};

/// Everything the solvers and dynamics need at one pose.
struct ModelEvaluation {
  VecX lengths;
  std::vector<Vec3> directions;  // u_k, moving frame
  MatX6 jacobian;                // Lambda
  std::vector<Mat6> second;      // T_k(i, j) = L_i L_j l_k; empty unless requested
};

class RobotModel {
 public:
  RobotModel(StewartModel m) : geometry_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  RobotModel(PulleyModel m) : geometry_(std::move(m)) {}   // NOLINT(google-explicit-constructor)

  const std::variant<StewartModel, PulleyModel>& geometry() const { return geometry_; }
  bool is_stewart() const { return std::holds_alternative<StewartModel>(geometry_); }
  std::string type_name() const { return is_stewart() ? "stewart" : "pulley"; }
  std::size_t actuator_count() const;

  /// Lengths, directions and Lambda; second tables too when depth is second.
  ModelEvaluation evaluate(const Pose& eta, Depth depth = Depth::first) const;

  /// Lengths computed entirely through the jet machinery (used as an independent path).
  std::vector<LieJet<double>> length_jets(const EvalContext& ctx) const;

 private:
  std::variant<StewartModel, PulleyModel> geometry_;
};

VecX ik_lengths(const RobotModel& model, const Pose& eta);
std::vector<Vec3> cable_direction(const RobotModel& model, const Pose& eta);
MatX6 jacobian(const RobotModel& model, const Pose& eta);
std::vector<Mat6> second_lie(const RobotModel& model, const Pose& eta);
/// tau = Lambda^T f.
Wrench force_to_wrench(const RobotModel& model, const Pose& eta, const VecX& f);
/// det(Lambda); only defined for six actuators.
double singularity_measure(const RobotModel& model, const Pose& eta);

/// Row 2 (r x u, u) of Lambda.
Vec6 lambda_row(const Vec3& r, const Vec3& u);

/// Pulley quantities in the (m, n) plane, exposed for tests and diagnostics.
struct PulleyPlane {
  double h1;
  double h2;
  double u1;
  double u2;
  double length;
};
/// Straight from the planar formulas, given h1, h2 and p.
PulleyPlane pulley_plane(double h1, double h2, double p);

/// Reference geometries used by the tests, harness and data/ files; identity is home.
/// Stewart: anchors on a unit circle at z = -1, attachments on radius 0.7 at z = 0.
StewartModel reference_stewart_geometry();
/// Eight cables from the corners of a 2.0 x 1.5 box-like frame to a small platform.
PulleyModel reference_pulley_geometry();

}  // namespace dqlie
