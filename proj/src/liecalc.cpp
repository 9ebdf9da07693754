#include "dqlie/liecalc.hpp"

#include <atomic>
#include <string>

#include "dqlie/small_matrix.hpp"

namespace dqlie {

namespace {

std::uint64_t next_context_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

template <class V>
using Partials = typename LieJet<V>::Partials;
template <class V>
using Table = typename LieJet<V>::Table;

LieJet<Quaternion> scale(const LieJet<double>& s, const LieJet<Quaternion>& q) {
  return jet_combine([](double a, const Quaternion& b) -> Quaternion { return a * b; }, s, q);
}

LieJet<double> qdot(const LieJet<Quaternion>& x, const LieJet<Quaternion>& y) {
  return jet_combine([](const Quaternion& a, const Quaternion& b) -> double { return dot(a, b); }, x, y);
}

}  // namespace

EvalContext::EvalContext(const Pose& eta, Depth depth) : eta_(eta), depth_(depth), id_(next_context_id()) {
  for (int i = 0; i < 6; ++i) eta_beta_[static_cast<std::size_t>(i)] = eta.value() * VectorDualQuaternion::basis(i).to_dq();
}

std::uint64_t detail::merge_context(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw ContextMismatchError("jets from different evaluation contexts (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
}

// ------------------------------------------------------------- products

LieJet<double> operator*(const LieJet<double>& x, const LieJet<double>& y) {
  return jet_combine([](double a, double b) -> double { return a * b; }, x, y);
}

LieJet<Vec3> operator*(const LieJet<double>& s, const LieJet<Vec3>& v) {
  return jet_combine([](double a, const Vec3& b) -> Vec3 { return a * b; }, s, v);
}

LieJet<double> dot(const LieJet<Vec3>& x, const LieJet<Vec3>& y) {
  return jet_combine([](const Vec3& a, const Vec3& b) -> double { return a.dot(b); }, x, y);
}

LieJet<Vec3> cross(const LieJet<Vec3>& x, const LieJet<Vec3>& y) {
  return jet_combine([](const Vec3& a, const Vec3& b) -> Vec3 { return a.cross(b); }, x, y);
}

LieJet<Vec3> operator*(const LieJet<Mat3>& m, const LieJet<Vec3>& v) {
  return jet_combine([](const Mat3& a, const Vec3& b) -> Vec3 { return a * b; }, m, v);
}

LieJet<Quaternion> operator*(const LieJet<Quaternion>& x, const LieJet<Quaternion>& y) {
  return jet_combine([](const Quaternion& a, const Quaternion& b) -> Quaternion { return a * b; }, x, y);
}

LieJet<DualQuaternion> operator*(const LieJet<DualQuaternion>& x, const LieJet<DualQuaternion>& y) {
  return jet_combine([](const DualQuaternion& a, const DualQuaternion& b) -> DualQuaternion { return a * b; }, x, y);
}

// -------------------------------------------------------- scalar functions

LieJet<double> sqrt(const LieJet<double>& x) {
  const double v = x.value();
  if (v < 0.0) throw DomainError("sqrt of a negative jet value");
  if (v == 0.0 && !x.is_constant()) throw DomainError("sqrt jet is not differentiable at zero");
  ScalarDerivatives<1> h;
  h.value = std::sqrt(v);
  if (v > 0.0) {
    h.grad[0] = 0.5 / h.value;
    h.hess[0][0] = -0.25 / (v * h.value);
  }
  return jet_chain<1>(h, {x});
}

LieJet<double> reciprocal(const LieJet<double>& x) {
  const double v = x.value();
  if (v == 0.0) throw NonInvertibleError("reciprocal of a zero jet value");
  ScalarDerivatives<1> h;
  h.value = 1.0 / v;
  h.grad[0] = -h.value * h.value;
  h.hess[0][0] = 2.0 * h.value * h.value * h.value;
  return jet_chain<1>(h, {x});
}

LieJet<double> atan2(const LieJet<double>& y, const LieJet<double>& x) {
  const double yv = y.value();
  const double xv = x.value();
  const double r2 = xv * xv + yv * yv;
  if (r2 == 0.0) throw DomainError("atan2 jet at the origin");
  const double r4 = r2 * r2;
  ScalarDerivatives<2> h;
  h.value = std::atan2(yv, xv);
  h.grad = {xv / r2, -yv / r2};
  h.hess[0][0] = -2.0 * xv * yv / r4;
  h.hess[1][1] = 2.0 * xv * yv / r4;
  h.hess[0][1] = h.hess[1][0] = (yv * yv - xv * xv) / r4;
  return jet_chain<2>(h, {y, x});
}

// ------------------------------------------------------------ components

LieJet<Quaternion> primary_part(const LieJet<DualQuaternion>& j) {
  return jet_linear([](const DualQuaternion& d) { return d.primary; }, j);
}

LieJet<Quaternion> dual_part(const LieJet<DualQuaternion>& j) {
  return jet_linear([](const DualQuaternion& d) { return d.dual; }, j);
}

LieJet<Quaternion> conj(const LieJet<Quaternion>& j) {
  return jet_linear([](const Quaternion& q) { return q.conj(); }, j);
}

LieJet<Vec3> vector_part(const LieJet<Quaternion>& j) {
  return jet_linear([](const Quaternion& q) -> Vec3 { return q.vec(); }, j);
}

LieJet<double> component(const LieJet<Vec3>& j, int index) {
  return jet_linear([index](const Vec3& v) { return v[index]; }, j);
}

LieJet<Vec3> from_components(const LieJet<double>& x, const LieJet<double>& y, const LieJet<double>& z) {
  auto lift = [](const LieJet<double>& s, int k) {
    return jet_linear([k](double v) -> Vec3 { return v * Vec3::Unit(k); }, s);
  };
  return lift(x, 0) + lift(y, 1) + lift(z, 2);
}

// ------------------------------------------------------------------ seeds

LieJet<DualQuaternion> jet_seed_pose(const EvalContext& ctx) {
  Partials<DualQuaternion> p;
  for (int i = 0; i < 6; ++i) p[static_cast<std::size_t>(i)] = ctx.eta_beta(i);
  std::optional<Table<DualQuaternion>> t;
  if (ctx.second_order()) {
    t.emplace();
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k)
        (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            ctx.eta_beta(i) * VectorDualQuaternion::basis(k).to_dq();
  }
  return {ctx.eta().value(), std::move(p), std::move(t), ctx.id()};
}

LieJet<Vec3> lie_of_fixed_point(const EvalContext& ctx, const Vec3& s) {
  // L_i s = 2 [star(s) -I] e_i; differentiating that formula once more only hits star(s).
  Partials<Vec3> p;
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = 2.0 * s.cross(Vec3::Unit(i));
  for (int i = 3; i < 6; ++i) p[static_cast<std::size_t>(i)] = -2.0 * Vec3::Unit(i - 3);
  std::optional<Table<Vec3>> t;
  if (ctx.second_order()) {
    t.emplace();
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k)
        (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            k < 3 ? Vec3(2.0 * p[static_cast<std::size_t>(i)].cross(Vec3::Unit(k))) : Vec3::Zero();
  }
  return {s, std::move(p), std::move(t), ctx.id()};
}

LieJet<Vec3> lie_of_fixed_direction(const EvalContext& ctx, const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) throw InvariantError("fixed direction must be a unit vector");
  Partials<Vec3> p;
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = 2.0 * n.cross(Vec3::Unit(i));
  for (int i = 3; i < 6; ++i) p[static_cast<std::size_t>(i)] = Vec3::Zero();
  std::optional<Table<Vec3>> t;
  if (ctx.second_order()) {
    t.emplace();
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k)
        (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            k < 3 ? Vec3(2.0 * p[static_cast<std::size_t>(i)].cross(Vec3::Unit(k))) : Vec3::Zero();
  }
  return {n, std::move(p), std::move(t), ctx.id()};
}

LieJet<Vec3> jet_of_world_point(const LieJet<DualQuaternion>& eta, const Vec3& s_fixed) {
  // s = Im(Q* (s~ Q - 2 B))
  const auto q = primary_part(eta);
  const auto b = dual_part(eta);
  const auto sq = LieJet<Quaternion>::constant(Quaternion::pure(s_fixed)) * q;
  return vector_part(conj(q) * (sq - 2.0 * b));
}

LieJet<Vec3> jet_of_world_direction(const LieJet<DualQuaternion>& eta, const Vec3& n_fixed) {
  const auto q = primary_part(eta);
  return vector_part(conj(q) * LieJet<Quaternion>::constant(Quaternion::pure(n_fixed)) * q);
}

LieJet<DualQuaternion> normalize(const LieJet<DualQuaternion>& eta) {
  // |eta|^-1 = 1/r - eps d/r^2 with r = |P| and d = P.B/r.
  const auto p = primary_part(eta);
  const auto b = dual_part(eta);
  const auto ir = reciprocal(sqrt(qdot(p, p)));
  const auto d = qdot(p, b) * ir;
  const auto prim = scale(ir, p);
  const auto dual = scale(ir, b) - scale(d * ir, prim);
  auto lift_p = jet_linear([](const Quaternion& q) { return DualQuaternion{q, Quaternion{}}; }, prim);
  auto lift_d = jet_linear([](const Quaternion& q) { return DualQuaternion{Quaternion{}, q}; }, dual);
  return lift_p + lift_d;
}

// ----------------------------------------------------------- contractions

Vec6 full_lie(const LieJet<double>& j) {
  Vec6 g;
  for (int i = 0; i < 6; ++i) g[i] = j.partial(i);
  return g;
}

Mat6 second_table(const LieJet<double>& j) {
  Mat6 t;
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k) t(i, k) = j.second(i, k);
  return t;
}

Mat6 hessian_of_normalized(const LieJet<double>& j) {
  const Mat6 t = second_table(j);
  return 0.5 * (t + t.transpose());
}

}  // namespace dqlie
