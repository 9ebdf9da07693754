#pragma once

// Forward-mode automatic Lie differentiation.
//
// A LieJet<V> carries a pose-dependent quantity g(eta) together with its six partial
// Lie derivatives L_i g = L_{beta_i} g and, optionally, the table L_i L_j g. Jets are
// built from seeds (the pose itself, world-fixed points and directions) and combined
// with the linearity, product and chain rules. Every bilinear product and scalar
// function used by the robot models has an overload here.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>

#include "dqlie/pose.hpp"

namespace dqlie {

enum class Depth { first, second };

/// Evaluation point shared by all jets of one computation.
class EvalContext {
 public:
  explicit EvalContext(const Pose& eta, Depth depth = Depth::first);

  const Pose& eta() const { return eta_; }
  Depth depth() const { return depth_; }
  bool second_order() const { return depth_ == Depth::second; }
  std::uint64_t id() const { return id_; }
  /// eta beta_i, formed once per context.
  const DualQuaternion& eta_beta(int i) const { return eta_beta_[static_cast<std::size_t>(i)]; }

 private:
  Pose eta_;
  Depth depth_;
  std::uint64_t id_;
  std::array<DualQuaternion, 6> eta_beta_;
};

inline double zero_like(double) { return 0.0; }
inline Quaternion zero_like(const Quaternion&) { return {}; }
inline DualQuaternion zero_like(const DualQuaternion&) { return {}; }
template <class Derived>
typename Derived::PlainObject zero_like(const Eigen::MatrixBase<Derived>& m) {
  return Derived::PlainObject::Zero(m.rows(), m.cols());
}

template <class V>
class LieJet {
 public:
  using Partials = std::array<V, 6>;
  using Table = std::array<std::array<V, 6>, 6>;

  LieJet(V value, Partials partials, std::optional<Table> second, std::uint64_t context)
      : value_(std::move(value)), partials_(std::move(partials)), second_(std::move(second)), context_(context) {}

  /// A pose-independent quantity; combines with jets of any context.
  static LieJet constant(V value) {
    Partials p;
    p.fill(zero_like(value));
    return LieJet(std::move(value), std::move(p), std::nullopt, 0);
  }

  const V& value() const { return value_; }
  const V& partial(int i) const { return partials_[static_cast<std::size_t>(i)]; }
  const Partials& partials() const { return partials_; }
  std::uint64_t context() const { return context_; }
  bool is_constant() const { return context_ == 0; }
  /// Constants count as carrying an (identically zero) second table.
  bool has_second() const { return is_constant() || second_.has_value(); }
  /// L_i L_j g.
  V second(int i, int j) const {
    if (second_) return (*second_)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (is_constant()) return zero_like(value_);
    throw DomainError("jet carries no second Lie derivatives");
  }

 private:
  V value_;
  Partials partials_;
  std::optional<Table> second_;
  std::uint64_t context_;
};

namespace detail {

std::uint64_t merge_context(std::uint64_t a, std::uint64_t b);

template <class V>
using Table = typename LieJet<V>::Table;

}  // namespace detail

/// Applies a linear map to the value and every derivative slot.
template <class F, class V>
auto jet_linear(F&& f, const LieJet<V>& j) {
  using R = std::decay_t<std::invoke_result_t<F&, const V&>>;
  typename LieJet<R>::Partials p{};
  for (int i = 0; i < 6; ++i) p[static_cast<std::size_t>(i)] = f(j.partial(i));
  std::optional<typename LieJet<R>::Table> t;
  if (!j.is_constant() && j.has_second()) {
    t.emplace();
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k) (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = f(j.second(i, k));
  }
  return LieJet<R>(f(j.value()), std::move(p), std::move(t), j.context());
}

/// Product rule for a real-bilinear `op`:
///   L_i (g1*g2) = g1 * L_i g2 + L_i g1 * g2
///   L_i L_j (g1*g2) = L_i g1 * L_j g2 + g1 * L_i L_j g2 + L_i L_j g1 * g2 + L_j g1 * L_i g2
template <class Op, class A, class B>
auto jet_combine(Op&& op, const LieJet<A>& x, const LieJet<B>& y) {
  using R = std::decay_t<std::invoke_result_t<Op&, const A&, const B&>>;
  const std::uint64_t ctx = detail::merge_context(x.context(), y.context());
  typename LieJet<R>::Partials p{};
  for (int i = 0; i < 6; ++i) {
    R v = op(x.value(), y.partial(i));
    v += op(x.partial(i), y.value());
    p[static_cast<std::size_t>(i)] = std::move(v);
  }
  std::optional<typename LieJet<R>::Table> t;
  if (ctx != 0 && x.has_second() && y.has_second()) {
    t.emplace();
    for (int i = 0; i < 6; ++i) {
      for (int k = 0; k < 6; ++k) {
        R v = op(x.partial(i), y.partial(k));
        v += op(x.partial(k), y.partial(i));
        if (!y.is_constant()) v += op(x.value(), y.second(i, k));
        if (!x.is_constant()) v += op(x.second(i, k), y.value());
        (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = std::move(v);
      }
    }
  }
  return LieJet<R>(op(x.value(), y.value()), std::move(p), std::move(t), ctx);
}

/// Value, gradient and Hessian of a scalar map h: R^M -> R at one point.
template <std::size_t M>
struct ScalarDerivatives {
  double value = 0.0;
  std::array<double, M> grad{};
  std::array<std::array<double, M>, M> hess{};
};

/// Chain rule: L_i h(g) = sum_a h_a L_i g_a, and
/// L_i L_j h(g) = sum_ab h_ab L_i g_a L_j g_b + sum_a h_a L_i L_j g_a.
template <std::size_t M>
LieJet<double> jet_chain(const ScalarDerivatives<M>& h, const std::array<LieJet<double>, M>& args) {
  std::uint64_t ctx = 0;
  bool second = true;
  for (const auto& g : args) {
    ctx = detail::merge_context(ctx, g.context());
    second = second && g.has_second();
  }
  typename LieJet<double>::Partials p{};
  for (int i = 0; i < 6; ++i) {
    double v = 0.0;
    for (std::size_t a = 0; a < M; ++a) v += h.grad[a] * args[a].partial(i);
    p[static_cast<std::size_t>(i)] = v;
  }
  std::optional<typename LieJet<double>::Table> t;
  if (ctx != 0 && second) {
    t.emplace();
    for (int i = 0; i < 6; ++i) {
      for (int k = 0; k < 6; ++k) {
        double v = 0.0;
        for (std::size_t a = 0; a < M; ++a) {
          v += h.grad[a] * args[a].second(i, k);
          for (std::size_t b = 0; b < M; ++b) v += h.hess[a][b] * args[a].partial(i) * args[b].partial(k);
        }
        (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = v;
      }
    }
  }
  return LieJet<double>(h.value, std::move(p), std::move(t), ctx);
}

// Linearity.

template <class V>
LieJet<V> operator+(const LieJet<V>& x, const LieJet<V>& y) {
  const std::uint64_t ctx = detail::merge_context(x.context(), y.context());
  typename LieJet<V>::Partials p{};
  for (int i = 0; i < 6; ++i) p[static_cast<std::size_t>(i)] = x.partial(i) + y.partial(i);
  std::optional<typename LieJet<V>::Table> t;
  if (ctx != 0 && x.has_second() && y.has_second()) {
    t.emplace();
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k) (*t)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = x.second(i, k) + y.second(i, k);
  }
  return LieJet<V>(x.value() + y.value(), std::move(p), std::move(t), ctx);
}

template <class V>
LieJet<V> operator*(double s, const LieJet<V>& x) {
  return jet_linear([s](const V& v) -> V { return s * v; }, x);
}

template <class V>
LieJet<V> operator-(const LieJet<V>& x) {
  return -1.0 * x;
}

template <class V>
LieJet<V> operator-(const LieJet<V>& x, const LieJet<V>& y) {
  return x + (-y);
}

// Product-rule instances.

LieJet<double> operator*(const LieJet<double>& x, const LieJet<double>& y);
LieJet<Vec3> operator*(const LieJet<double>& s, const LieJet<Vec3>& v);
LieJet<double> dot(const LieJet<Vec3>& x, const LieJet<Vec3>& y);
LieJet<Vec3> cross(const LieJet<Vec3>& x, const LieJet<Vec3>& y);
LieJet<Vec3> operator*(const LieJet<Mat3>& m, const LieJet<Vec3>& v);
LieJet<Quaternion> operator*(const LieJet<Quaternion>& x, const LieJet<Quaternion>& y);
LieJet<DualQuaternion> operator*(const LieJet<DualQuaternion>& x, const LieJet<DualQuaternion>& y);

// Chain-rule instances.

LieJet<double> sqrt(const LieJet<double>& x);
LieJet<double> reciprocal(const LieJet<double>& x);
/// atan2(y, x) with the usual branch (-pi, pi].
LieJet<double> atan2(const LieJet<double>& y, const LieJet<double>& x);

// Component extraction (linear).

LieJet<Quaternion> primary_part(const LieJet<DualQuaternion>& j);
LieJet<Quaternion> dual_part(const LieJet<DualQuaternion>& j);
LieJet<Quaternion> conj(const LieJet<Quaternion>& j);
LieJet<Vec3> vector_part(const LieJet<Quaternion>& j);
LieJet<double> component(const LieJet<Vec3>& j, int index);
LieJet<Vec3> from_components(const LieJet<double>& x, const LieJet<double>& y, const LieJet<double>& z);

// Seeds.

/// Jet of g(eta) = eta: L_i eta = eta beta_i, L_i L_j eta = eta beta_i beta_j.
LieJet<DualQuaternion> jet_seed_pose(const EvalContext& ctx);

/// Jet of the moving-frame coordinates s of a world-fixed point, given s at ctx.eta():
/// L_theta s = 2 [star(s) -I] theta = -a x s - b.
LieJet<Vec3> lie_of_fixed_point(const EvalContext& ctx, const Vec3& s);
/// Jet of the moving-frame coordinates n of a world-fixed unit direction:
/// L_theta n = 2 [star(n) 0] theta = -a x n.
LieJet<Vec3> lie_of_fixed_direction(const EvalContext& ctx, const Vec3& n);

/// Same quantities computed from the fixed-frame data via jet_seed_pose.
LieJet<Vec3> jet_of_world_point(const LieJet<DualQuaternion>& eta, const Vec3& s_fixed);
LieJet<Vec3> jet_of_world_direction(const LieJet<DualQuaternion>& eta, const Vec3& n_fixed);

/// Dual-quaternion normalization expressed with jets, eta |eta|^-1.
LieJet<DualQuaternion> normalize(const LieJet<DualQuaternion>& eta);

// Contractions.

/// theta . L g = L_theta g.
template <class V>
V lie_directional(const LieJet<V>& j, const VectorDualQuaternion& theta) {
  V v = theta[0] * j.partial(0);
  for (int i = 1; i < 6; ++i) v += theta[i] * j.partial(i);
  return v;
}

/// L_theta L_psi g = sum_ij theta_i psi_j L_i L_j g.
template <class V>
V lie_second_directional(const LieJet<V>& j, const VectorDualQuaternion& theta, const VectorDualQuaternion& psi) {
  V v = zero_like(j.value());
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k) v += (theta[i] * psi[k]) * j.second(i, k);
  return v;
}

/// Full Lie derivative of a scalar as a coefficient vector.
Vec6 full_lie(const LieJet<double>& j);
/// Table T(i,j) = L_i L_j g of a scalar jet.
Mat6 second_table(const LieJet<double>& j);
/// Hessian of theta -> g(eta normalize(1+theta)) at 0: (L_i L_j g + L_j L_i g)/2.
Mat6 hessian_of_normalized(const LieJet<double>& j);

// Finite-difference oracles, independent of the jet machinery.

/// (g(eta normalize(1+r theta)) - g(eta normalize(1-r theta))) / 2r.
template <class G>
auto fd_lie_oracle(G&& g, const Pose& eta, const VectorDualQuaternion& theta, double r = 1e-5) {
  if (!(r >= 1e-8 && r <= 1e-2)) throw DomainError("finite-difference step must lie in [1e-8, 1e-2]");
  const DualQuaternion one = DualQuaternion::identity();
  const Pose plus = eta * normalize(one + (r * theta).to_dq());
  const Pose minus = eta * normalize(one - (r * theta).to_dq());
  using R = std::decay_t<decltype(g(eta))>;
  R diff = g(plus);
  diff -= g(minus);
  return R((1.0 / (2.0 * r)) * diff);
}

/// Nested central differences for L_theta L_psi g.
template <class G>
auto fd_second_lie_oracle(G&& g, const Pose& eta, const VectorDualQuaternion& theta, const VectorDualQuaternion& psi,
                          double r = 1e-4) {
  auto inner = [&](const Pose& p) { return fd_lie_oracle(g, p, psi, r); };
  return fd_lie_oracle(inner, eta, theta, r);
}

}  // namespace dqlie
