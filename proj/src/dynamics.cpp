#include "dqlie/dynamics.hpp"

#include <string>

#include "dqlie/liecalc.hpp"
#include "dqlie/screws.hpp"
#include "dqlie/small_matrix.hpp"

namespace dqlie {

namespace {

void require_moving(const Twist& phi) {
  if (phi.frame() != Frame::moving) throw DomainError("dynamics expects a moving-frame twist");
}

void check_mass(const MassModel& mass, const RobotModel& model) { mass.validate(model.actuator_count()); }

}  // namespace

void MassModel::validate(std::size_t actuator_count) const {
  if (!(std::isfinite(m_e) && m_e > 0)) throw DomainError("m_e must be positive");
  if (!M_e.allFinite() || !r0.allFinite() || !g_fixed.allFinite()) throw DomainError("mass data must be finite");
  if ((M_e - M_e.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + M_e.cwiseAbs().maxCoeff())) {
    throw DomainError("M_e must be symmetric");
  }
  if (Eigen::LLT<Mat3>(M_e).info() != Eigen::Success) throw DomainError("M_e must be positive definite");
  if (!has_actuator_inertia()) return;
  const auto n = static_cast<Eigen::Index>(actuator_count);
  if (M0.rows() != n || M0.cols() != n) {
    throw DomainError("M0 must be " + std::to_string(n) + " x " + std::to_string(n));
  }
  if (!M0.allFinite()) throw DomainError("M0 must be finite");
  const double scale = 1.0 + M0.cwiseAbs().maxCoeff();
  if ((M0 - M0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("M0 must be symmetric");
  if (Eigen::SelfAdjointEigenSolver<MatX>(M0).eigenvalues().minCoeff() < -1e-12 * scale) {
    throw DomainError("M0 must be positive semi-definite");
  }
}

MassModel reference_stewart_mass() {
  MassModel m;
  m.m_e = 10.0;
  m.M_e = Vec3(0.5, 0.6, 0.9).asDiagonal();
  m.r0 = Vec3(0, 0, 0.05);
  m.M0 = 0.05 * MatX::Identity(6, 6);
  m.g_fixed = Vec3(0, 0, -9.81);
  return m;
}

MassModel reference_pulley_mass() {
  MassModel m;
  m.m_e = 5.0;
  m.M_e = Vec3(0.2, 0.3, 0.4).asDiagonal();
  m.r0 = Vec3(0.01, -0.02, 0.03);
  m.M0 = 0.1 * MatX::Identity(8, 8);
  m.g_fixed = Vec3(0, 0, -9.81);
  return m;
}

Vec3 gravity_moving(const MassModel& mass, const Pose& eta) { return eta.pull_back_direction(mass.g_fixed); }

Mat6 rigid_body_mass(const MassModel& mass) {
  const Mat3 s = hodge_star(mass.r0);
  const double m = mass.m_e;
  Mat6 out;
  out << mass.M_e - m * s * s, m * s, -m * s, m * Mat3::Identity();
  return 4.0 * out;
}

Mat6 effective_mass(const MassModel& mass, const RobotModel& model, const Pose& eta) {
  check_mass(mass, model);
  Mat6 out = rigid_body_mass(mass);
  if (mass.has_actuator_inertia()) {
    const MatX6 lam = jacobian(model, eta);
    out += lam.transpose() * mass.M0 * lam;
  }
  return out;
}

VectorDualQuaternion gravity_wrench_term(const MassModel& mass, const Pose& eta) {
  const Vec3 g = gravity_moving(mass, eta);
  return VectorDualQuaternion::from_parts(-2.0 * mass.m_e * mass.r0.cross(g), -2.0 * mass.m_e * g);
}

DynamicsTerms dynamics_terms(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi) {
  require_moving(phi);
  check_mass(mass, model);
  DynamicsTerms out;
  const bool act = mass.has_actuator_inertia();
  out.eval = model.evaluate(eta, act ? Depth::second : Depth::first);
  out.M = rigid_body_mass(mass);

  const Vec3 w = phi.angular();
  const Vec3 v = phi.linear();
  const Vec3& r0 = mass.r0;
  const double m = mass.m_e;
  // Newton-Euler about the moving origin; the (w.r0)(w x r0) term enters with a minus sign.
  const Vec3 top = 2.0 * w.cross(mass.M_e * w) + 2.0 * m * (r0.cross(w.cross(v)) - w.dot(r0) * w.cross(r0));
  const Vec3 bottom = 2.0 * m * (w.cross(v) + w.cross(w.cross(r0)));
  out.mu = VectorDualQuaternion::from_parts(top, bottom) + gravity_wrench_term(mass, eta);

  if (act) {
    const MatX6& lam = out.eval.jacobian;
    out.M += lam.transpose() * mass.M0 * lam;
    const Vec6& p = phi.screw().coeffs();
    out.curvature.resize(lam.rows());
    for (Eigen::Index k = 0; k < lam.rows(); ++k) {
      out.curvature[k] = p.dot(out.eval.second[static_cast<std::size_t>(k)] * p);
    }
    out.mu += VectorDualQuaternion(Vec6(lam.transpose() * (mass.M0 * out.curvature)));
  }
  return out;
}

Wrench bias_wrench(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi) {
  return Wrench::from_screw(dynamics_terms(mass, model, eta, phi).mu);
}

VectorDualQuaternion forward_dynamics(const MassModel& mass, const RobotModel& model, const Pose& eta,
                                      const Twist& phi, const Wrench& tau) {
  const DynamicsTerms d = dynamics_terms(mass, model, eta, phi);
  const Eigen::LLT<Mat6> llt(d.M);
  if (llt.info() != Eigen::Success) throw NonInvertibleError("effective mass is not positive definite");
  return VectorDualQuaternion(Vec6(llt.solve((tau.screw() - d.mu).coeffs())));
}

VecX no_load_forces(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi,
                    const VectorDualQuaternion& alpha) {
  require_moving(phi);
  check_mass(mass, model);
  const auto n = static_cast<Eigen::Index>(model.actuator_count());
  if (!mass.has_actuator_inertia()) return VecX::Zero(n);
  const ModelEvaluation ev = model.evaluate(eta, Depth::second);
  const Vec6& p = phi.screw().coeffs();
  VecX c(n);
  for (Eigen::Index k = 0; k < n; ++k) c[k] = p.dot(ev.second[static_cast<std::size_t>(k)] * p);
  return mass.M0 * (c + ev.jacobian * alpha.coeffs());
}

double kinetic_energy(const MassModel& mass, const RobotModel& model, const Pose& eta, const Twist& phi) {
  require_moving(phi);
  const Vec6& p = phi.screw().coeffs();
  return 0.5 * p.dot(effective_mass(mass, model, eta) * p);
}

double potential_energy(const MassModel& mass, const Pose& eta) {
  return -mass.m_e * mass.g_fixed.dot(eta.apply(mass.r0));
}

EulerLagrangeBias euler_lagrange_bias(const MassModel& mass, const RobotModel& model, const Pose& eta,
                                      const Twist& phi) {
  require_moving(phi);
  check_mass(mass, model);
  const Vec6& p = phi.screw().coeffs();

  // Jet of M. The rigid-body block is constant in the moving frame; the actuator
  // block is Lambda^T M0 Lambda with L_i Lambda(k, j) = L_i L_j l_k.
  LieJet<MatX> m_jet = LieJet<MatX>::constant(MatX(rigid_body_mass(mass)));
  if (mass.has_actuator_inertia()) {
    const EvalContext ctx(eta, Depth::second);
    const auto lengths = model.length_jets(ctx);
    const auto n = static_cast<Eigen::Index>(lengths.size());
    MatX value(n, 6);
    LieJet<MatX>::Partials dl;
    dl.fill(MatX(n, 6));
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& lk = lengths[static_cast<std::size_t>(k)];
      for (int j = 0; j < 6; ++j) {
        value(k, j) = lk.partial(j);
        for (int i = 0; i < 6; ++i) dl[static_cast<std::size_t>(i)](k, j) = lk.second(i, j);
      }
    }
    const LieJet<MatX> lam(value, dl, std::nullopt, ctx.id());
    const auto m0_lam = jet_combine([](const MatX& a, const MatX& b) -> MatX { return a * b; },
                                    LieJet<MatX>::constant(mass.M0), lam);
    m_jet = m_jet + jet_combine([](const MatX& a, const MatX& b) -> MatX { return a.transpose() * b; }, lam, m0_lam);
  }

  // Jet of v = -m g~ . (world position of r0).
  const EvalContext ctx1(eta);
  const auto e = jet_seed_pose(ctx1);
  const auto q = primary_part(e);
  const auto world = vector_part((q * LieJet<Quaternion>::constant(Quaternion::pure(mass.r0)) + 2.0 * dual_part(e)) *
                                 conj(q));
  const LieJet<double> v = dot(LieJet<Vec3>::constant(-mass.m_e * mass.g_fixed), world);

  Vec6 mu1 = Vec6::Zero();
  for (int i = 0; i < 6; ++i) {
    const Vec6 dm_p = m_jet.partial(i) * p;
    mu1 += p[i] * dm_p;
    mu1[i] += -0.5 * p.dot(dm_p) + v.partial(i);
  }
  const VectorDualQuaternion m_phi(Vec6(m_jet.value() * p));
  EulerLagrangeBias out;
  out.mu1 = VectorDualQuaternion(mu1);
  out.mu2 = 2.0 * screw_ltimes(m_phi, phi.screw());
  return out;
}

}  // namespace dqlie
