#pragma once

#include <array>
#include <iosfwd>

#include "dqlie/quaternion.hpp"

namespace dqlie {

using Vec8 = Eigen::Matrix<double, 8, 1>;

/// Length scale l > 0 that makes primary (unitless) and dual (length) parts comparable.
class CharacteristicLength {
 public:
  constexpr CharacteristicLength() = default;
  explicit CharacteristicLength(double l) : value_(l) {
    if (!(l > 0.0)) throw DomainError("characteristic length must be positive");
  }
  constexpr double value() const { return value_; }

 private:
  double value_ = 1.0;
};

/// Dual quaternion A + eps B.
///
/// Component order for the R^8 identification is (i, j, k, eps i, eps j, eps k, 1, eps);
/// every other module indexes dual quaternions through `components()` / `basis()`.
struct DualQuaternion {
  Quaternion primary;
  Quaternion dual;

  constexpr DualQuaternion() = default;
  constexpr DualQuaternion(const Quaternion& p, const Quaternion& d) : primary(p), dual(d) {}

  static constexpr DualQuaternion identity() { return {Quaternion::real(1.0), Quaternion{}}; }
  /// The i-th basis element, zero-based: 0..2 -> i,j,k; 3..5 -> eps i,j,k; 6 -> 1; 7 -> eps.
  static DualQuaternion basis(int index);
  static DualQuaternion from_components(const Vec8& c);

  Vec8 components() const;
  constexpr DualQuaternion conj() const { return {primary.conj(), dual.conj()}; }
  /// A^-1 - eps A^-1 B A^-1.
  DualQuaternion inverse() const;
  /// |A| + eps (A.B)/|A|.
  DualNumber norm() const;

  constexpr DualQuaternion operator-() const { return {-primary, -dual}; }
  constexpr DualQuaternion& operator+=(const DualQuaternion& o) {
    primary += o.primary;
    dual += o.dual;
    return *this;
  }
  constexpr DualQuaternion& operator-=(const DualQuaternion& o) {
    primary -= o.primary;
    dual -= o.dual;
    return *this;
  }
  constexpr DualQuaternion& operator*=(double s) {
    primary *= s;
    dual *= s;
    return *this;
  }

  friend constexpr bool operator==(const DualQuaternion&, const DualQuaternion&) = default;
};

constexpr DualQuaternion operator+(DualQuaternion a, const DualQuaternion& b) { return a += b; }
constexpr DualQuaternion operator-(DualQuaternion a, const DualQuaternion& b) { return a -= b; }
constexpr DualQuaternion operator*(DualQuaternion a, double s) { return a *= s; }
constexpr DualQuaternion operator*(double s, DualQuaternion a) { return a *= s; }

constexpr DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b) {
  return {a.primary * b.primary, a.primary * b.dual + a.dual * b.primary};
}
constexpr DualQuaternion operator*(const DualNumber& s, const DualQuaternion& a) {
  return {s.re * a.primary, s.re * a.dual + s.du * a.primary};
}
constexpr DualQuaternion operator*(const DualQuaternion& a, const DualNumber& s) { return s * a; }

/// R^8 dot product: A.C + B.D.
constexpr double dot(const DualQuaternion& a, const DualQuaternion& b) {
  return dot(a.primary, b.primary) + dot(a.dual, b.dual);
}

inline DualQuaternion dq_mul(const DualQuaternion& a, const DualQuaternion& b) { return a * b; }
inline DualQuaternion dq_add(const DualQuaternion& a, const DualQuaternion& b) { return a + b; }
inline DualQuaternion dq_conj(const DualQuaternion& a) { return a.conj(); }
inline DualQuaternion dq_inv(const DualQuaternion& a) { return a.inverse(); }
inline DualNumber dq_norm(const DualQuaternion& a) { return a.norm(); }

/// (|P|^2 + l^-2 |D|^2)^(1/2).
double size(const DualQuaternion& eta, CharacteristicLength l = {});

std::ostream& operator<<(std::ostream& os, const DualQuaternion& dq);

/// Vector dual quaternion theta = a/2 + eps b/2, stored by its six basis coefficients.
///
/// `coeffs()` is the R^6 identification (theta_1..theta_6); `a()` and `b()` are the
/// rotation and translation 3-vectors, twice the primary and dual vector parts.
class VectorDualQuaternion {
 public:
  VectorDualQuaternion() : coeffs_(Vec6::Zero()) {}
  explicit VectorDualQuaternion(const Vec6& coeffs) : coeffs_(coeffs) {}

  /// theta = a/2 + eps b/2.
  static VectorDualQuaternion from_ab(const Vec3& a, const Vec3& b);
  /// theta = p + eps d, given the primary and dual vector parts directly.
  static VectorDualQuaternion from_parts(const Vec3& p, const Vec3& d);
  static VectorDualQuaternion basis(int index) { return VectorDualQuaternion(Vec6::Unit(index)); }
  /// Drops the real parts of both halves.
  static VectorDualQuaternion vector_part(const DualQuaternion& dq);

  const Vec6& coeffs() const { return coeffs_; }
  Vec3 primary_vec() const { return coeffs_.head<3>(); }
  Vec3 dual_vec() const { return coeffs_.tail<3>(); }
  Vec3 a() const { return 2.0 * coeffs_.head<3>(); }
  Vec3 b() const { return 2.0 * coeffs_.tail<3>(); }
  DualQuaternion to_dq() const;
  double operator[](int i) const { return coeffs_[i]; }

  VectorDualQuaternion operator-() const { return VectorDualQuaternion(-coeffs_); }
  VectorDualQuaternion& operator+=(const VectorDualQuaternion& o) {
    coeffs_ += o.coeffs_;
    return *this;
  }
  VectorDualQuaternion& operator-=(const VectorDualQuaternion& o) {
    coeffs_ -= o.coeffs_;
    return *this;
  }
  VectorDualQuaternion& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }

 private:
  Vec6 coeffs_;
};

inline VectorDualQuaternion operator+(VectorDualQuaternion a, const VectorDualQuaternion& b) { return a += b; }
inline VectorDualQuaternion operator-(VectorDualQuaternion a, const VectorDualQuaternion& b) { return a -= b; }
inline VectorDualQuaternion operator*(VectorDualQuaternion a, double s) { return a *= s; }
inline VectorDualQuaternion operator*(double s, VectorDualQuaternion a) { return a *= s; }
inline double dot(const VectorDualQuaternion& a, const VectorDualQuaternion& b) {
  return a.coeffs().dot(b.coeffs());
}
double size(const VectorDualQuaternion& theta, CharacteristicLength l = {});

}  // namespace dqlie
