#include <algorithm>
#include <cmath>
#include <ostream>

#include "dqlie/dual_quaternion.hpp"
#include "dqlie/pose.hpp"
#include "dqlie/quaternion.hpp"
#include "dqlie/small_matrix.hpp"

namespace dqlie {

// ---------------------------------------------------------------- Quaternion

Quaternion rotation_quaternion(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return Quaternion::real(1.0);
  const Vec3 u = axis / n;
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z()};
}

double rotation_angle(const Quaternion& q) {
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w));
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

std::ostream& operator<<(std::ostream& os, const DualNumber& d) {
  return os << d.re << " + eps " << d.du;
}

// ------------------------------------------------------------ DualQuaternion

DualQuaternion DualQuaternion::basis(int index) {
  Vec8 c = Vec8::Zero();
  c[index] = 1.0;
  return from_components(c);
}

DualQuaternion DualQuaternion::from_components(const Vec8& c) {
  return {Quaternion{c[6], c[0], c[1], c[2]}, Quaternion{c[7], c[3], c[4], c[5]}};
}

Vec8 DualQuaternion::components() const {
  Vec8 c;
  c << primary.x, primary.y, primary.z, dual.x, dual.y, dual.z, primary.w, dual.w;
  return c;
}

DualQuaternion DualQuaternion::inverse() const {
  if (primary.norm2() == 0.0) throw NonInvertibleError("dual quaternion with zero primary part");
  const Quaternion ai = primary.inverse();
  return {ai, -(ai * dual * ai)};
}

DualNumber DualQuaternion::norm() const {
  const double n = primary.norm();
  if (n == 0.0) throw NonInvertibleError("norm of dual quaternion with zero primary part");
  return {n, dot(primary, dual) / n};
}

double size(const DualQuaternion& eta, CharacteristicLength l) {
  const double il = 1.0 / l.value();
  return std::sqrt(eta.primary.norm2() + il * il * eta.dual.norm2());
}

std::ostream& operator<<(std::ostream& os, const DualQuaternion& dq) {
  return os << dq.primary << " + eps " << dq.dual;
}

VectorDualQuaternion VectorDualQuaternion::from_ab(const Vec3& a, const Vec3& b) {
  Vec6 c;
  c << 0.5 * a, 0.5 * b;
  return VectorDualQuaternion(c);
}

VectorDualQuaternion VectorDualQuaternion::from_parts(const Vec3& p, const Vec3& d) {
  Vec6 c;
  c << p, d;
  return VectorDualQuaternion(c);
}

VectorDualQuaternion VectorDualQuaternion::vector_part(const DualQuaternion& dq) {
  return from_parts(dq.primary.vec(), dq.dual.vec());
}

DualQuaternion VectorDualQuaternion::to_dq() const {
  return {Quaternion::pure(primary_vec()), Quaternion::pure(dual_vec())};
}

double size(const VectorDualQuaternion& theta, CharacteristicLength l) {
  const double il = 1.0 / l.value();
  return std::sqrt(theta.coeffs().head<3>().squaredNorm() + il * il * theta.coeffs().tail<3>().squaredNorm());
}

// ---------------------------------------------------------------------- Pose

namespace {

double unit_deviation(const DualQuaternion& dq) {
  return std::max(std::abs(dq.primary.norm2() - 1.0), std::abs(2.0 * dot(dq.primary, dq.dual)));
}

}  // namespace

Pose Pose::from_dual_quaternion(const DualQuaternion& dq) {
  const double dev = unit_deviation(dq);
  if (dev < kUnitTolerance) return Pose(dq);
  if (dev < kRenormalizeTolerance) return normalize(dq);
  throw InvariantError("dual quaternion is not unit (|eta* eta - 1| = " + std::to_string(dev) + ")");
}

Pose Pose::from_rotation_translation(const Quaternion& q, const Vec3& t) {
  const double dev = std::abs(q.norm2() - 1.0);
  if (!(dev < kRenormalizeTolerance)) {
    throw InvariantError("rotation quaternion is not unit (|Q|^2 - 1 = " + std::to_string(dev) + ")");
  }
  const Quaternion qu = dev < kUnitTolerance ? q : q / q.norm();
  return Pose(DualQuaternion{qu, 0.5 * (Quaternion::pure(t) * qu)});
}

Vec3 Pose::translation() const {
  return (2.0 * (value_.dual * value_.primary.conj())).vec();
}

Vec3 Pose::apply(const Vec3& r) const {
  const Quaternion& q = value_.primary;
  return ((q * Quaternion::pure(r) + 2.0 * value_.dual) * q.conj()).vec();
}

Vec3 Pose::rotate(const Vec3& r) const {
  const Quaternion& q = value_.primary;
  return (q * Quaternion::pure(r) * q.conj()).vec();
}

Vec3 Pose::pull_back_point(const Vec3& s_fixed) const {
  const Quaternion& q = value_.primary;
  return (q.conj() * (Quaternion::pure(s_fixed) * q - 2.0 * value_.dual)).vec();
}

Vec3 Pose::pull_back_direction(const Vec3& n_fixed) const {
  const Quaternion& q = value_.primary;
  return (q.conj() * Quaternion::pure(n_fixed) * q).vec();
}

Pose Pose::canonical() const {
  const Quaternion& q = value_.primary;
  bool flip = q.w < 0.0;
  if (q.w == 0.0) {
    for (double c : {q.x, q.y, q.z}) {
      if (c != 0.0) {
        flip = c < 0.0;
        break;
      }
    }
  }
  return flip ? Pose(-value_) : *this;
}

Pose normalize(const DualQuaternion& eta) {
  // Defining expression eta |eta|^-1, which also divides the dual correction by |Q|.
  return Pose(eta * eta.norm().inverse());
}

Pose exp(const VectorDualQuaternion& theta) {
  const Vec3 a = theta.primary_vec();
  const Vec3 b = theta.dual_vec();
  const double phi = a.norm();
  // sinc(phi) and (cos(phi) - sinc(phi)) / phi^2
  double sinc = 0.0;
  double c2 = 0.0;
  if (phi < 1e-6) {
    const double p2 = phi * phi;
    sinc = 1.0 - p2 / 6.0;
    c2 = -1.0 / 3.0 + p2 / 30.0;
  } else {
    sinc = std::sin(phi) / phi;
    c2 = (std::cos(phi) - sinc) / (phi * phi);
  }
  const double ab = a.dot(b);
  const Quaternion primary{std::cos(phi), sinc * a.x(), sinc * a.y(), sinc * a.z()};
  const Vec3 dv = sinc * b + ab * c2 * a;
  const Quaternion dual{-ab * sinc, dv.x(), dv.y(), dv.z()};
  return Pose(DualQuaternion{primary, dual});
}

Pose normalize_one_plus(const VectorDualQuaternion& theta, CharacteristicLength l) {
  if (!(size(theta, l) < 1.0)) throw DomainError("normalize_one_plus requires size(theta) < 1");
  return normalize(DualQuaternion::identity() + theta.to_dq());
}

// -------------------------------------------------------------- 3x3 helpers

Mat3 hodge_star(const Vec3& r) {
  Mat3 m;
  m << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
       -r.y(), r.x(), 0.0;
  return m;
}

Mat3 project_complement(const Vec3& u) {
  if (std::abs(u.norm() - 1.0) > 1e-9) throw InvariantError("project_complement requires a unit vector");
  return Mat3::Identity() - u * u.transpose();
}

Vec3 block_apply(const Mat3& a, const Mat3& b, const VectorDualQuaternion& theta) {
  return 0.5 * (a * theta.a() + b * theta.b());
}

VectorDualQuaternion block_apply(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d,
                                 const VectorDualQuaternion& theta) {
  return VectorDualQuaternion::from_parts(0.5 * (a * theta.a() + b * theta.b()),
                                          0.5 * (c * theta.a() + d * theta.b()));
}

Mat6 block_matrix(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d) {
  Mat6 m;
  m << a, b, c, d;
  return m;
}

}  // namespace dqlie
