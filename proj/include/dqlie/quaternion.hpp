#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iosfwd>

#include "dqlie/errors.hpp"

namespace dqlie {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Hamilton quaternion w + x i + y j + z k.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion real(double w) { return {w, 0.0, 0.0, 0.0}; }
  /// Vector quaternion identified with a 3-vector.
  static Quaternion pure(const Vec3& v) { return {0.0, v.x(), v.y(), v.z()}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  Vec3 vec() const { return {x, y, z}; }
  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }

  Quaternion inverse() const {
    const double n2 = norm2();
    if (n2 == 0.0) throw NonInvertibleError("quaternion inverse of zero");
    return {w / n2, -x / n2, -y / n2, -z / n2};
  }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quaternion quat_mul(const Quaternion& a, const Quaternion& b) { return a * b; }

/// Euclidean inner product on R^4, equal to Re(A B*).
constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// exp(angle/2 * axis) for a unit axis: rotation by `angle` about `axis`.
Quaternion rotation_quaternion(const Vec3& axis, double angle);

/// Rotation angle in [0, pi] of a unit quaternion, independent of the sign of q.
double rotation_angle(const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// Dual number a + eps b with eps^2 = 0.
struct DualNumber {
  double re = 0.0;
  double du = 0.0;

  constexpr DualNumber() = default;
  constexpr DualNumber(double re_, double du_ = 0.0) : re(re_), du(du_) {}

  DualNumber inverse() const {
    if (re == 0.0) throw NonInvertibleError("dual number with zero real part");
    return {1.0 / re, -du / (re * re)};
  }

  friend constexpr bool operator==(const DualNumber&, const DualNumber&) = default;
};

constexpr DualNumber operator+(const DualNumber& a, const DualNumber& b) { return {a.re + b.re, a.du + b.du}; }
constexpr DualNumber operator-(const DualNumber& a, const DualNumber& b) { return {a.re - b.re, a.du - b.du}; }
constexpr DualNumber operator*(const DualNumber& a, const DualNumber& b) {
  return {a.re * b.re, a.re * b.du + a.du * b.re};
}
inline DualNumber operator/(const DualNumber& a, const DualNumber& b) { return a * b.inverse(); }

/// Principal square root; requires a positive real part.
inline DualNumber sqrt(const DualNumber& a) {
  if (!(a.re > 0.0)) throw NonInvertibleError("square root of dual number with non-positive real part");
  const double r = std::sqrt(a.re);
  return {r, a.du / (2.0 * r)};
}

std::ostream& operator<<(std::ostream& os, const DualNumber& d);

}  // namespace dqlie
