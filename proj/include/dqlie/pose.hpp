#pragma once

#include "dqlie/dual_quaternion.hpp"

namespace dqlie {

/// Rigid motion r -> Q r Q* + t, held as the unit dual quaternion Q + eps t Q / 2.
///
/// Construction from an arbitrary dual quaternion accepts values whose eta* eta
/// deviates from 1 by less than `kUnitTolerance`, silently renormalizes up to
/// `kRenormalizeTolerance`, and throws InvariantError beyond that.
class Pose {
 public:
  static constexpr double kUnitTolerance = 1e-9;
  static constexpr double kRenormalizeTolerance = 1e-6;

  Pose() : value_(DualQuaternion::identity()) {}

  static Pose identity() { return {}; }
  static Pose from_dual_quaternion(const DualQuaternion& dq);
  static Pose from_components(const Vec8& c) { return from_dual_quaternion(DualQuaternion::from_components(c)); }
  /// Q must be unit within the same tolerances as above.
  static Pose from_rotation_translation(const Quaternion& q, const Vec3& t);

  const DualQuaternion& value() const { return value_; }
  Vec8 components() const { return value_.components(); }
  const Quaternion& rotation() const { return value_.primary; }
  /// t = 2 B Q*.
  Vec3 translation() const;
  /// Equals the conjugate for unit dual quaternions.
  Pose inverse() const { return Pose(value_.conj()); }
  /// Image of the 3-vector r: (Q r + 2B) Q*.
  Vec3 apply(const Vec3& r) const;
  /// Direction r rotated by Q only.
  Vec3 rotate(const Vec3& r) const;
  /// Coordinates in this frame of a point given in the fixed frame (inverse of apply).
  Vec3 pull_back_point(const Vec3& s_fixed) const;
  /// Coordinates in this frame of a direction given in the fixed frame.
  Vec3 pull_back_direction(const Vec3& n_fixed) const;
  /// Sign representative with Re(P) >= 0 (first nonzero primary component positive on ties).
  Pose canonical() const;

  friend Pose operator*(const Pose& a, const Pose& b) { return Pose(a.value_ * b.value_); }
  friend bool operator==(const Pose&, const Pose&) = default;

 private:
  explicit Pose(const DualQuaternion& unit) : value_(unit) {}
  friend Pose normalize(const DualQuaternion& eta);
  friend Pose exp(const VectorDualQuaternion& theta);

  DualQuaternion value_;
};

inline DualQuaternion operator*(const Pose& a, const DualQuaternion& b) { return a.value() * b; }
inline DualQuaternion operator*(const DualQuaternion& a, const Pose& b) { return a * b.value(); }

/// eta |eta|^-1, the unit dual quaternion nearest in the sense of the dual norm.
Pose normalize(const DualQuaternion& eta);
inline Pose dq_normalize(const DualQuaternion& eta) { return normalize(eta); }

/// exp(theta) = sum theta^k / k!, in closed form.
Pose exp(const VectorDualQuaternion& theta);
inline Pose dq_exp(const VectorDualQuaternion& theta) { return exp(theta); }

/// normalize(1 + theta); requires size_l(theta) < 1.
Pose normalize_one_plus(const VectorDualQuaternion& theta, CharacteristicLength l = {});

inline Pose pose_from_rotation_translation(const Quaternion& q, const Vec3& t) {
  return Pose::from_rotation_translation(q, t);
}
inline Vec3 pose_apply(const Pose& eta, const Vec3& r) { return eta.apply(r); }

}  // namespace dqlie
