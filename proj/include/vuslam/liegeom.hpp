/******************************************************************************
 * Copyright 2026 vuslam Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vuslam {

/// Skew-symmetric cross-product matrix: skew(v) * u == v x u.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// 3D rotation stored as a unit quaternion (w, x, y, z).
///
/// Every operation that produces a Rotation renormalizes, so the unit-norm
/// invariant survives arbitrarily long update chains.
class Rotation {
 public:
  Rotation() : q_(1.0, 0.0, 0.0, 0.0) {}

  /// Components in (w, x, y, z) order; normalized on construction.
  Rotation(double w, double x, double y, double z) : q_(w, x, y, z) {
    q_.normalize();
  }

  explicit Rotation(const Eigen::Quaterniond& q) : q_(q.normalized()) {}

  static Rotation identity() { return Rotation(); }

  static Rotation from_matrix(const Eigen::Matrix3d& m) {
    return Rotation(Eigen::Quaterniond(m));
  }

  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

  Rotation inverse() const { return Rotation(q_.conjugate()); }

  Rotation operator*(const Rotation& rhs) const {
    return Rotation(q_ * rhs.q_);
  }

  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const {
    return q_ * v;
  }

  const Eigen::Quaterniond& quat() const { return q_; }

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

 private:
  Eigen::Quaterniond q_;
};

/// Rodrigues exponential: axis-angle (radians) to Rotation.
Rotation so3_exp(const Eigen::Vector3d& omega);

/// Inverse of so3_exp. Returns the axis-angle with norm <= pi.
///
/// At the angle-pi singularity the axis sign is ambiguous; the component of
/// largest magnitude is made positive (lowest index on ties) so the result is
/// deterministic.
Eigen::Vector3d so3_log(const Rotation& r);

/// Inverse right Jacobian of SO(3); used by pose-graph residual Jacobians.
Eigen::Matrix3d so3_right_jacobian_inverse(const Eigen::Vector3d& omega);

/// World-to-body rigid transform: p_B = R_BW * p_W + t_BW.
struct PoseSE3 {
  Rotation rotation;             // R_BW
  Eigen::Vector3d translation{0.0, 0.0, 0.0};  // t_BW

  static PoseSE3 identity() { return PoseSE3{}; }
};

/// Local disturbance [dt; dw]: translation (m) first, axis-angle (rad) second.
using TangentVector = Eigen::Matrix<double, 6, 1>;

/// Composition: (A * B)(p) == A(B(p)).
PoseSE3 compose(const PoseSE3& a, const PoseSE3& b);

PoseSE3 inverse(const PoseSE3& t);

Eigen::Vector3d transform_point(const PoseSE3& t, const Eigen::Vector3d& p);

/// Retraction onto the pose manifold: left perturbation in the body frame,
/// T' = [exp(dw) | dt] * T. First-order effect on body-frame coordinates of
/// a world point: p_B' = p_B + dt - skew(p_B) * dw.
PoseSE3 boxplus(const PoseSE3& x, const TangentVector& delta);

}  // namespace vuslam
