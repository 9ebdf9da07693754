#include "dqlie/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace dqlie {

namespace {

using nlohmann::json;

/// A JSON node together with its path, for error messages like `robot.json: actuators[2].anchor: ...`.
class Node {
 public:
  Node(const json& j, std::string source, std::string path) : j_(j), source_(std::move(source)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ": " + (path_.empty() ? "<root>" : path_) + ": " + what);
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node operator[](const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) Node(j_, source_, join(key)).fail("missing field");
    return Node(j_.at(key), source_, join(key));
  }
  Node at(std::size_t i) const { return Node(j_.at(i), source_, path_ + "[" + std::to_string(i) + "]"); }
  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  const json& raw() const { return j_; }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  VecX vector(std::size_t expected = 0) const {
    const std::size_t n = array_size();
    if (expected != 0 && n != expected) fail("expected an array of " + std::to_string(expected) + " numbers");
    VecX v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = at(i).number();
    return v;
  }
  Vec3 vec3() const { return vector(3); }
  MatX matrix(std::size_t rows, std::size_t cols) const {
    if (array_size() != rows) fail("expected " + std::to_string(rows) + " rows");
    MatX m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.row(static_cast<Eigen::Index>(r)) = at(r).vector(cols).transpose();
    return m;
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string source_;
  std::string path_;
};

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const VecX& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}
json to_json(const MatX& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(VecX(m.row(r).transpose())));
  return a;
}

MassModel parse_mass(const Node& n, std::size_t actuators) {
  MassModel m;
  m.m_e = n["m_e"].number();
  if (n.has("M_e")) {
    const Node me = n["M_e"];
    if (me.array_size() == 3 && me.at(0).raw().is_number()) {
      m.M_e = me.vec3().asDiagonal();
    } else {
      m.M_e = me.matrix(3, 3);
    }
  }
  if (n.has("r0")) m.r0 = n["r0"].vec3();
  if (n.has("g")) m.g_fixed = n["g"].vec3();
  if (n.has("M0") && n.has("M0_diag")) n.fail("give either M0 or M0_diag, not both");
  const auto k = static_cast<Eigen::Index>(actuators);
  if (n.has("M0_diag")) {
    const Node d = n["M0_diag"];
    if (d.raw().is_number()) {
      m.M0 = d.number() * MatX::Identity(k, k);
    } else {
      m.M0 = d.vector(actuators).asDiagonal();
    }
  } else if (n.has("M0")) {
    m.M0 = n["M0"].matrix(actuators, actuators);
  }
  try {
    m.validate(actuators);
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
  return m;
}

Vec8 pose_components(const Pose& p) { return p.value().components(); }

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RobotDescription parse_robot(const std::string& text, const std::string& source) {
  const json j = parse_text(text, source);
  const Node root(j, source, "");
  const std::string type = root["type"].string();
  if (root.has("units")) {
    const std::string units = root["units"].string();
    if (units != "SI" && units != "m") root["units"].fail("only SI units are supported");
  }
  const double l = root.has("characteristic_length") ? root["characteristic_length"].number() : 1.0;
  if (!(l > 0.0)) root["characteristic_length"].fail("must be positive");
  const Node acts = root["actuators"];
  const std::size_t n = acts.array_size();
  if (n == 0) acts.fail("at least one actuator is required");

  std::optional<RobotModel> model;
  try {
    if (type == "stewart") {
      std::vector<StewartLeg> legs;
      for (std::size_t i = 0; i < n; ++i) legs.push_back({acts.at(i)["attachment"].vec3(), acts.at(i)["anchor"].vec3()});
      model.emplace(StewartModel(std::move(legs)));
    } else if (type == "pulley") {
      std::vector<PulleyActuator> ps;
      for (std::size_t i = 0; i < n; ++i) {
        const Node a = acts.at(i);
        PulleyActuator p;
        p.axis = a["axis"].vec3();
        p.axis_point = a["axis_point"].vec3();
        p.rod_offset = a["rod_offset"].number();
        p.pulley_radius = a["pulley_radius"].number();
        p.attachment = a["attachment"].vec3();
        ps.push_back(p);
      }
      model.emplace(PulleyModel(std::move(ps)));
    } else {
      root["type"].fail("expected \"stewart\" or \"pulley\", got \"" + type + "\"");
    }
  } catch (const GeometryError& e) {
    acts.fail(e.what());
  }
  std::optional<MassModel> mass;
  if (root.has("mass")) mass = parse_mass(root["mass"], n);
  return RobotDescription{*model, mass, CharacteristicLength(l)};
}

std::string robot_to_json(const RobotDescription& robot) {
  json j;
  j["type"] = robot.model.type_name();
  j["units"] = "SI";
  j["characteristic_length"] = robot.l.value();
  json acts = json::array();
  if (robot.model.is_stewart()) {
    for (const StewartLeg& leg : std::get<StewartModel>(robot.model.geometry()).legs()) {
      acts.push_back({{"attachment", to_json(leg.attachment)}, {"anchor", to_json(leg.anchor)}});
    }
  } else {
    for (const PulleyActuator& a : std::get<PulleyModel>(robot.model.geometry()).actuators()) {
      acts.push_back({{"axis", to_json(a.axis)},
                      {"axis_point", to_json(a.axis_point)},
                      {"rod_offset", a.rod_offset},
                      {"pulley_radius", a.pulley_radius},
                      {"attachment", to_json(a.attachment)}});
    }
  }
  j["actuators"] = acts;
  if (robot.mass) {
    const MassModel& m = *robot.mass;
    json mj;
    mj["m_e"] = m.m_e;
    mj["M_e"] = to_json(MatX(m.M_e));
    mj["r0"] = to_json(m.r0);
    mj["g"] = to_json(m.g_fixed);
    if (m.has_actuator_inertia()) {
      const MatX diag = m.M0.diagonal().asDiagonal();
      if (m.M0 == diag) {
        mj["M0_diag"] = to_json(VecX(m.M0.diagonal()));
      } else {
        mj["M0"] = to_json(m.M0);
      }
    }
    j["mass"] = mj;
  }
  return j.dump(2) + "\n";
}

Pose parse_pose(const std::string& text, const std::string& source) {
  const json j = parse_text(text, source);
  const Node root(j, source, "");
  try {
    if (root.has("pose")) {
      const VecX c = root["pose"].vector(8);
      return Pose::from_components(Vec8(c));
    }
    const VecX q = root["rotation"].vector(4);
    const Vec3 t = root.has("translation") ? root["translation"].vec3() : Vec3::Zero();
    const Quaternion rq(q[0], q[1], q[2], q[3]);
    if (std::abs(rq.norm() - 1.0) > 1e-9) root["rotation"].fail("rotation quaternion must have unit norm");
    return Pose::from_rotation_translation(rq, t);
  } catch (const InvariantError& e) {
    root.fail(std::string("not a unit dual quaternion: ") + e.what());
  }
}

std::string pose_to_json(const Pose& pose) {
  json j;
  j["pose"] = to_json(VecX(pose_components(pose)));
  j["rotation"] = json::array({pose.rotation().w, pose.rotation().x, pose.rotation().y, pose.rotation().z});
  j["translation"] = to_json(pose.translation());
  return j.dump(2) + "\n";
}

std::vector<VecX> parse_lengths(const std::string& text, const std::string& source) {
  const json j = parse_text(text, source);
  const Node root(j, source, "");
  std::vector<VecX> out;
  if (root.has("lengths")) {
    out.push_back(root["lengths"].vector());
  } else {
    const Node s = root["series"];
    for (std::size_t i = 0; i < s.array_size(); ++i) out.push_back(s.at(i).vector());
    if (out.empty()) s.fail("series is empty");
  }
  return out;
}

std::string lengths_to_json(const VecX& lengths) {
  json j;
  j["lengths"] = to_json(lengths);
  return j.dump(2) + "\n";
}

SimState parse_initial_state(const std::string& text, const std::string& source) {
  const json j = parse_text(text, source);
  const Node root(j, source, "");
  SimState s;
  if (root.has("pose")) {
    try {
      s.eta = Pose::from_components(Vec8(root["pose"].vector(8)));
    } catch (const InvariantError& e) {
      root["pose"].fail(e.what());
    }
  }
  if (root.has("twist")) s.phi = Twist(VectorDualQuaternion(Vec6(root["twist"].vector(6))));
  if (root.has("t")) s.t = root["t"].number();
  return s;
}

WrenchSchedule parse_schedule(const std::string& text, const RobotDescription& robot, const std::string& source) {
  const json j = parse_text(text, source);
  const Node root(j, source, "");
  const std::string type = root["type"].string();
  if (type == "zero") return zero_wrench();
  const double freq = root.has("frequency") ? root["frequency"].number() : 1.0;
  if (type == "gravity_hold") {
    if (!robot.mass) root.fail("gravity_hold needs a mass block in the robot description");
    const Vec3 q = root.has("torque") ? root["torque"].vec3() : Vec3::Zero();
    const Vec3 p = root.has("force") ? root["force"].vec3() : Vec3::Zero();
    return gravity_hold_schedule(*robot.mass, Wrench(q, p), freq);
  }
  if (type == "actuator_sine") {
    const std::size_t n = robot.model.actuator_count();
    const VecX bias = root.has("bias") ? root["bias"].vector(n) : VecX::Zero(static_cast<Eigen::Index>(n));
    const VecX amp = root["amplitude"].vector(n);
    return actuator_force_schedule(robot.model, [bias, amp, freq](double t) -> VecX {
      return bias + std::sin(2.0 * std::numbers::pi * freq * t) * amp;
    });
  }
  root["type"].fail("expected \"zero\", \"gravity_hold\" or \"actuator_sine\"");
}

std::string report_to_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["final_step_size"] = r.final_step_size;
  j["final_loss"] = r.final_loss;
  j["residual_inf"] = r.residual_inf;
  j["stopped_at_floor"] = r.stopped_at_floor;
  j["pose"] = to_json(VecX(pose_components(r.pose)));
  return j.dump(2) + "\n";
}

std::string stats_to_json(const CampaignStats& s, const TrialConfig& cfg) {
  json j;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate;
  j["mean_iterations"] = s.mean_iterations;
  j["mean_restarts"] = s.mean_restarts;
  j["max_restarts"] = s.max_restarts;
  j["mean_wall_time_us"] = s.mean_wall_time_us;
  j["max_residual"] = s.max_residual;
  j["config"] = {{"pose_count", cfg.pose_count},
                 {"max_angle", cfg.max_angle},
                 {"translation_box", to_json(cfg.translation_box)},
                 {"seed", cfg.seed},
                 {"warm_start_perturbation", cfg.warm_start_perturbation}};
  return j.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const EnergyAudit* audit) {
  os << "t";
  for (int i = 1; i <= 8; ++i) os << ",eta" << i;
  for (int i = 1; i <= 6; ++i) os << ",phi" << i;
  if (audit) os << ",work_twist,work_actuator,energy_change";
  os << "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const SimState& s = traj.states[k];
    os << g17(s.t);
    const Vec8 c = s.eta.value().components();
    for (int i = 0; i < 8; ++i) os << ',' << g17(c[i]);
    for (int i = 0; i < 6; ++i) os << ',' << g17(s.phi.screw()[i]);
    if (audit) {
      os << ',' << g17(audit->work_twist[k]) << ',' << g17(audit->work_actuator[k]) << ','
         << g17(audit->energy_change[k]);
    }
    os << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,eta1", 0) != 0) throw ParseError(source + ":1: expected a trajectory header");
  Trajectory traj;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(source + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() < 15) throw ParseError(source + ":" + std::to_string(lineno) + ": expected at least 15 columns");
    SimState s;
    s.t = v[0];
    Vec8 c;
    for (int i = 0; i < 8; ++i) c[i] = v[static_cast<std::size_t>(1 + i)];
    Vec6 p;
    for (int i = 0; i < 6; ++i) p[i] = v[static_cast<std::size_t>(9 + i)];
    try {
      s.eta = Pose::from_components(c);
    } catch (const InvariantError&) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": pose is not a unit dual quaternion");
    }
    s.phi = Twist(VectorDualQuaternion(p));
    traj.states.push_back(s);
  }
  if (traj.states.size() >= 2) traj.dt = traj.states[1].t - traj.states[0].t;
  return traj;
}

}  // namespace dqlie
