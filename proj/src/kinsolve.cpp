#include "dqlie/kinsolve.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dqlie {

namespace {

// Once steps are this small, a step that fails to halve means we are at the rounding floor.
constexpr double kFloorThreshold = 1e-8;

void check_lengths(const RobotModel& model, const VecX& lengths) {
  if (lengths.size() != static_cast<Eigen::Index>(model.actuator_count())) {
    throw DomainError("expected " + std::to_string(model.actuator_count()) + " actuator values, got " +
                      std::to_string(lengths.size()));
  }
  if (!lengths.allFinite()) throw DomainError("actuator values must be finite");
}

/// Shared iteration loop; `step` maps (eta, evaluation) to theta.
template <class Step>
SolveReport iterate(const RobotModel& model, const VecX& lengths, const Pose& guess, const SolveSettings& s,
                    Depth depth, Step&& step) {
  s.validate();
  check_lengths(model, lengths);
  SolveReport rep;
  Pose eta = guess;
  if (s.record_iterates) rep.iterates.push_back(eta);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < s.max_iters; ++k) {
    const ModelEvaluation ev = model.evaluate(eta, depth);
    const VectorDualQuaternion theta = step(ev, VecX(ev.lengths - lengths));
    const Pose next = retract(eta, theta, s.l, s.max_step);
    const double sz = size(next.value() - eta.value(), s.l);
    eta = next;
    rep.iterations = k + 1;
    rep.step_sizes.push_back(sz);
    if (s.record_iterates) rep.iterates.push_back(eta);
    if (sz < s.tol_step) break;
    if (prev < kFloorThreshold && sz >= 0.5 * prev) {
      rep.stopped_at_floor = true;
      break;
    }
    prev = sz;
  }
  rep.final_step_size = rep.step_sizes.empty() ? 0.0 : rep.step_sizes.back();
  rep.pose = eta.canonical();
  const VecX r = ik_lengths(model, rep.pose) - lengths;
  rep.final_loss = 0.5 * r.squaredNorm();
  rep.residual_inf = r.lpNorm<Eigen::Infinity>();
  return rep;
}

}  // namespace

void SolveSettings::validate() const {
  if (!(tol_step > 0 && tol_loss > 0 && max_iters > 0 && max_restarts > 0 && cond_limit > 0 && max_step > 0)) {
    throw DomainError("solver settings must all be positive");
  }
  if (!(max_step < 1.0)) throw DomainError("max_step must be below 1 so that 1 + theta stays invertible");
}

Pose retract(const Pose& eta, const VectorDualQuaternion& theta, CharacteristicLength l, double max_step) {
  const double sz = size(theta, l);
  if (!std::isfinite(sz)) throw DomainError("non-finite step");
  const VectorDualQuaternion t = sz > max_step ? (max_step / sz) * theta : theta;
  return eta * normalize_one_plus(t, l);
}

SolveReport fk_exact(const RobotModel& model, const VecX& lengths, const Pose& guess, const SolveSettings& s) {
  if (model.actuator_count() != 6) throw UnsupportedError("fk_exact needs exactly six actuators");
  SolveReport rep = iterate(model, lengths, guess, s, Depth::first, [&](const ModelEvaluation& ev, const VecX& r) {
    const Mat6 lam = ev.jacobian;
    const Eigen::JacobiSVD<Mat6> svd(lam, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv[5] > 0.0) || sv[0] / sv[5] > s.cond_limit) {
      throw SingularityError("Lambda is singular or ill-conditioned (cond = " + std::to_string(sv[0] / sv[5]) + ")");
    }
    return VectorDualQuaternion(-svd.solve(r));
  });
  rep.converged = rep.final_step_size < s.tol_step || (rep.stopped_at_floor && rep.final_loss < s.tol_loss);
  return rep;
}

SolveReport fk_overconstrained(const RobotModel& model, const VecX& lengths, const Pose& guess,
                               const SolveSettings& s) {
  SolveReport rep = iterate(model, lengths, guess, s, Depth::second, [&](const ModelEvaluation& ev, const VecX& r) {
    const Vec6 delta = ev.jacobian.transpose() * r;
    const Mat6 gn = ev.jacobian.transpose() * ev.jacobian;
    Mat6 h = gn;
    for (std::size_t m = 0; m < ev.second.size(); ++m) {
      const Mat6& t = ev.second[m];
      h += (0.5 * r[static_cast<Eigen::Index>(m)]) * (t + t.transpose());
    }
    Eigen::LLT<Mat6> llt(h);
    if (llt.info() != Eigen::Success) llt.compute(gn);
    if (llt.info() != Eigen::Success) throw SingularityError("Gauss-Newton matrix is not positive definite");
    return VectorDualQuaternion(-llt.solve(delta));
  });
  rep.converged = rep.final_loss < s.tol_loss;
  return rep;
}

SolveReport fk_solve(const RobotModel& model, const VecX& lengths, const Pose& guess, const SolveSettings& s) {
  return model.actuator_count() == 6 ? fk_exact(model, lengths, guess, s)
                                     : fk_overconstrained(model, lengths, guess, s);
}

SolveReport fk_multistart(const RobotModel& model, const VecX& lengths, const SolveSettings& s,
                          const GuessSource& guess_source) {
  s.validate();
  check_lengths(model, lengths);
  SolveReport best;
  bool have_best = false;
  for (int attempt = 0; attempt < s.max_restarts; ++attempt) {
    SolveReport rep;
    try {
      rep = fk_solve(model, lengths, guess_source(), s);
    } catch (const GeometryError&) {
      continue;
    } catch (const SingularityError&) {
      continue;
    }
    rep.restarts = attempt;
    if (rep.converged) return rep;
    if (!have_best || rep.final_loss < best.final_loss) {
      best = std::move(rep);
      have_best = true;
    }
  }
  if (!have_best) throw SingularityError("every restart hit a degenerate configuration");
  best.restarts = s.max_restarts - 1;
  best.converged = false;
  return best;
}

double fk_loss(const RobotModel& model, const VecX& lengths, const Pose& eta) {
  check_lengths(model, lengths);
  return 0.5 * (ik_lengths(model, eta) - lengths).squaredNorm();
}

}  // namespace dqlie
