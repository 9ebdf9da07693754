#pragma once

#include "dqlie/dual_quaternion.hpp"

namespace dqlie {

/// Skew matrix with star(r) s = r x s.
Mat3 hodge_star(const Vec3& r);

/// P_u x = x - (u.x) u; u must be a unit vector.
Mat3 project_complement(const Vec3& u);

/// [A B] theta = A a/2 + B b/2.
Vec3 block_apply(const Mat3& a, const Mat3& b, const VectorDualQuaternion& theta);

/// [A B; C D] theta = (A a + B b)/2 + eps (C a + D b)/2.
VectorDualQuaternion block_apply(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d,
                                 const VectorDualQuaternion& theta);

/// The 6x6 matrix [A B; C D]; acting on coefficient vectors it agrees with block_apply.
Mat6 block_matrix(const Mat3& a, const Mat3& b, const Mat3& c, const Mat3& d);

}  // namespace dqlie
