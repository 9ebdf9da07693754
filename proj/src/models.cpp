#include "dqlie/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqlie/small_matrix.hpp"

namespace dqlie {

namespace {

template <class V>
LieJet<V> C(const V& v) {
  return LieJet<V>::constant(v);
}

LieJet<double> C(double v) { return LieJet<double>::constant(v); }

std::string where(std::size_t k) { return "actuator " + std::to_string(k) + ": "; }

// ---------------------------------------------------------------- Stewart

struct LegState {
  Vec3 s;  // anchor, moving frame
  Vec3 u;
  double length;
};

LegState leg_state(const StewartLeg& leg, const Pose& eta, std::size_t k) {
  const Vec3 s = eta.pull_back_point(leg.anchor);
  const Vec3 d = leg.attachment - s;
  const double len = d.norm();
  if (!(len >= kMinLegLength)) throw GeometryError(where(k) + "leg length vanishes");
  return {s, d / len, len};
}

/// T(i, j) = L_i L_j l = (2 [star(r); I] L_i u)_j with L u = (2/l) P_u [-star(s) I].
Mat6 stewart_second(const Vec3& r, const LegState& st) {
  Eigen::Matrix<double, 3, 6> lu;
  lu << -hodge_star(st.s), Mat3::Identity();
  lu = (2.0 / st.length) * project_complement(st.u) * lu;
  Eigen::Matrix<double, 6, 3> left;
  left << 2.0 * hodge_star(r), 2.0 * Mat3::Identity();
  return (left * lu).transpose();
}

// ----------------------------------------------------------------- Pulley

struct PulleyJets {
  LieJet<double> length;
  LieJet<Vec3> u;
};

PulleyJets pulley_jets(const EvalContext& ctx, const PulleyActuator& a, std::size_t k) {
  const Pose& eta = ctx.eta();
  const auto x = lie_of_fixed_point(ctx, eta.pull_back_point(a.axis_point));
  const auto n = lie_of_fixed_direction(ctx, eta.pull_back_direction(a.axis));
  const auto v = x - C(a.attachment);
  const auto h2 = dot(n, v);
  const auto d = v - h2 * n;
  const auto dd = dot(d, d);
  if (!(dd.value() > kMinLegLength * kMinLegLength)) {
    throw GeometryError(where(k) + "attachment lies on the pulley axis");
  }
  const auto dn = sqrt(dd);
  const auto m = reciprocal(dn) * d;
  const auto h1 = dn - C(a.rod_offset);
  const auto d2 = h1 * h1 + h2 * h2;
  const double p = a.pulley_radius;
  const auto clearance = d2 - C(p * p);
  if (!(clearance.value() >= kMinPulleyClearance)) {
    throw GeometryError(where(k) + "attachment inside the pulley (h1^2 + h2^2 <= p^2)");
  }
  const auto t = sqrt(clearance);
  const auto id2 = reciprocal(d2);
  const auto u1 = -(id2 * (h1 * t - C(p) * h2));
  const auto u2 = -(id2 * (h2 * t + C(p) * h1));
  auto u = u1 * m + u2 * n;
  auto len = t + C(p) * atan2(-u2, -u1);
  return {std::move(len), std::move(u)};
}

template <class Model>
void check_index_sizes(const Model& m) {
  if (m.size() == 0) throw GeometryError("robot model needs at least one actuator");
}

}  // namespace

// ------------------------------------------------------------ construction

StewartModel::StewartModel(std::vector<StewartLeg> legs) : legs_(std::move(legs)) {
  check_index_sizes(*this);
  for (std::size_t a = 0; a < legs_.size(); ++a) {
    if (!legs_[a].attachment.allFinite() || !legs_[a].anchor.allFinite()) {
      throw GeometryError(where(a) + "non-finite geometry");
    }
    for (std::size_t b = a + 1; b < legs_.size(); ++b) {
      if (legs_[a].anchor == legs_[b].anchor) {
        throw GeometryError(where(b) + "shares its ground anchor with actuator " + std::to_string(a));
      }
    }
  }
}

PulleyModel::PulleyModel(std::vector<PulleyActuator> actuators) : actuators_(std::move(actuators)) {
  check_index_sizes(*this);
  for (std::size_t k = 0; k < actuators_.size(); ++k) {
    const auto& a = actuators_[k];
    if (std::abs(a.axis.norm() - 1.0) > 1e-9) throw GeometryError(where(k) + "pulley axis must be a unit vector");
    if (!(a.rod_offset >= 0.0)) throw GeometryError(where(k) + "rod offset must be non-negative");
    if (!(a.pulley_radius >= 0.0)) throw GeometryError(where(k) + "pulley radius must be non-negative");
    if (!a.axis_point.allFinite() || !a.attachment.allFinite()) throw GeometryError(where(k) + "non-finite geometry");
  }
}

std::size_t RobotModel::actuator_count() const {
  return std::visit([](const auto& m) { return m.size(); }, geometry_);
}

Vec6 lambda_row(const Vec3& r, const Vec3& u) {
  Vec6 row;
  row << 2.0 * r.cross(u), 2.0 * u;
  return row;
}

ModelEvaluation RobotModel::evaluate(const Pose& eta, Depth depth) const {
  const std::size_t n = actuator_count();
  ModelEvaluation out;
  out.lengths.resize(static_cast<Eigen::Index>(n));
  out.directions.resize(n);
  out.jacobian.resize(static_cast<Eigen::Index>(n), 6);
  if (depth == Depth::second) out.second.resize(n);

  if (const auto* st = std::get_if<StewartModel>(&geometry_)) {
    for (std::size_t k = 0; k < n; ++k) {
      const StewartLeg& leg = st->legs()[k];
      const LegState s = leg_state(leg, eta, k);
      const auto row = static_cast<Eigen::Index>(k);
      out.lengths[row] = s.length;
      out.directions[k] = s.u;
      out.jacobian.row(row) = lambda_row(leg.attachment, s.u).transpose();
      if (depth == Depth::second) out.second[k] = stewart_second(leg.attachment, s);
    }
    return out;
  }

  const auto& pm = std::get<PulleyModel>(geometry_);
  const EvalContext ctx(eta);  // first order suffices: L_i L_j l = (2 [star(r); I] L_i u)_j
  for (std::size_t k = 0; k < n; ++k) {
    const PulleyActuator& a = pm.actuators()[k];
    const PulleyJets j = pulley_jets(ctx, a, k);
    const auto row = static_cast<Eigen::Index>(k);
    const Vec3& u = j.u.value();
    out.lengths[row] = j.length.value();
    out.directions[k] = u;
    out.jacobian.row(row) = lambda_row(a.attachment, u).transpose();
    if (depth == Depth::second) {
      Mat6 t;
      for (int i = 0; i < 6; ++i) t.row(i) = lambda_row(a.attachment, j.u.partial(i)).transpose();
      out.second[k] = t;
    }
  }
  return out;
}

std::vector<LieJet<double>> RobotModel::length_jets(const EvalContext& ctx) const {
  std::vector<LieJet<double>> out;
  if (const auto* st = std::get_if<StewartModel>(&geometry_)) {
    for (std::size_t k = 0; k < st->size(); ++k) {
      const StewartLeg& leg = st->legs()[k];
      const LegState s = leg_state(leg, ctx.eta(), k);
      const auto d = C(leg.attachment) - lie_of_fixed_point(ctx, s.s);
      out.push_back(sqrt(dot(d, d)));
    }
    return out;
  }
  const auto& pm = std::get<PulleyModel>(geometry_);
  for (std::size_t k = 0; k < pm.size(); ++k) out.push_back(pulley_jets(ctx, pm.actuators()[k], k).length);
  return out;
}

// ----------------------------------------------------------- free functions

VecX ik_lengths(const RobotModel& model, const Pose& eta) {
  if (const auto* st = std::get_if<StewartModel>(&model.geometry())) {
    VecX out(static_cast<Eigen::Index>(st->size()));
    for (std::size_t k = 0; k < st->size(); ++k) out[static_cast<Eigen::Index>(k)] = leg_state(st->legs()[k], eta, k).length;
    return out;
  }
  return model.evaluate(eta).lengths;
}

std::vector<Vec3> cable_direction(const RobotModel& model, const Pose& eta) { return model.evaluate(eta).directions; }

MatX6 jacobian(const RobotModel& model, const Pose& eta) { return model.evaluate(eta).jacobian; }

std::vector<Mat6> second_lie(const RobotModel& model, const Pose& eta) {
  return model.evaluate(eta, Depth::second).second;
}

Wrench force_to_wrench(const RobotModel& model, const Pose& eta, const VecX& f) {
  if (f.size() != static_cast<Eigen::Index>(model.actuator_count())) {
    throw DomainError("force vector has " + std::to_string(f.size()) + " entries, robot has " +
                      std::to_string(model.actuator_count()) + " actuators");
  }
  const Vec6 tau = jacobian(model, eta).transpose() * f;
  return Wrench::from_screw(VectorDualQuaternion(tau));
}

double singularity_measure(const RobotModel& model, const Pose& eta) {
  if (model.actuator_count() != 6) throw UnsupportedError("singularity measure is only defined for six actuators");
  return Mat6(jacobian(model, eta)).determinant();
}

PulleyPlane pulley_plane(double h1, double h2, double p) {
  const double d2 = h1 * h1 + h2 * h2;
  if (!(d2 - p * p >= kMinPulleyClearance)) throw GeometryError("h1^2 + h2^2 <= p^2");
  const double t = std::sqrt(d2 - p * p);
  const double u1 = -(h1 * t - h2 * p) / d2;
  const double u2 = -(h2 * t + h1 * p) / d2;
  return {h1, h2, u1, u2, t + p * std::atan2(-u2, -u1)};
}

// ------------------------------------------------------------- references

namespace {

Vec3 on_circle(double radius, double degrees, double z) {
  const double a = degrees * std::numbers::pi / 180.0;
  return {radius * std::cos(a), radius * std::sin(a), z};
}

}  // namespace

StewartModel reference_stewart_geometry() {
  constexpr double base[6] = {-15, 15, 105, 135, 225, 255};
  constexpr double top[6] = {-45, 45, 75, 165, 195, 285};
  std::vector<StewartLeg> legs;
  for (int k = 0; k < 6; ++k) legs.push_back({on_circle(0.7, top[k], 0.0), on_circle(1.0, base[k], -1.0)});
  return StewartModel(std::move(legs));
}

PulleyModel reference_pulley_geometry() {
  std::vector<PulleyActuator> acts;
  for (double az : {45.0, 135.0, 225.0, 315.0}) {
    for (int side : {1, -1}) {
      PulleyActuator a;
      a.axis = Vec3(0, 0, side);
      a.axis_point = on_circle(2.0, az, 1.5 * side);
      a.rod_offset = 0.05;
      a.pulley_radius = 0.04;
      a.attachment = on_circle(0.3, az + 60.0, 0.2 * side);  // mirrored offsets would leave a z-screw unconstrained
      acts.push_back(a);
    }
  }
  return PulleyModel(std::move(acts));
}

}  // namespace dqlie
