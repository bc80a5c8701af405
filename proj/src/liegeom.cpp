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
#include "vuslam/liegeom.hpp"

#include <cmath>

namespace vuslam {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<    0.0, -v.z(),  v.y(),
        v.z(),    0.0, -v.x(),
       -v.y(),  v.x(),    0.0;
  // clang-format on
  return s;
}

Rotation so3_exp(const Eigen::Vector3d& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  double w;
  double s;  // sin(theta/2) / theta
  if (theta < 1e-8) {
    w = 1.0 - theta2 / 8.0;
    s = 0.5 - theta2 / 48.0;
  } else {
    w = std::cos(0.5 * theta);
    s = std::sin(0.5 * theta) / theta;
  }
  return Rotation(w, s * omega.x(), s * omega.y(), s * omega.z());
}

Eigen::Vector3d so3_log(const Rotation& r) {
  Eigen::Quaterniond q = r.quat();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // angle in [0, pi]
  Eigen::Vector3d v = q.vec();
  const double n = v.norm();
  if (n < 1e-12) {
    return 2.0 * v;  // w ~ 1, theta ~ 2n
  }
  if (q.w() < 1e-12) {
    // Angle-pi branch: pick the deterministic axis sign.
    int dominant = 0;
    v.cwiseAbs().maxCoeff(&dominant);
    if (v[dominant] < 0.0) v = -v;
    return (M_PI / n) * v;
  }
  const double theta = 2.0 * std::atan2(n, q.w());
  return (theta / n) * v;
}

Eigen::Matrix3d so3_right_jacobian_inverse(const Eigen::Vector3d& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Eigen::Matrix3d w = skew(omega);
  if (theta < 1e-6) {
    return Eigen::Matrix3d::Identity() + 0.5 * w + (1.0 / 12.0) * w * w;
  }
  const double c =
      1.0 / theta2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  return Eigen::Matrix3d::Identity() + 0.5 * w + c * w * w;
}

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b) {
  return PoseSE3{a.rotation * b.rotation,
                 a.rotation * b.translation + a.translation};
}

PoseSE3 inverse(const PoseSE3& t) {
  const Rotation rinv = t.rotation.inverse();
  return PoseSE3{rinv, -(rinv * t.translation)};
}

Eigen::Vector3d transform_point(const PoseSE3& t, const Eigen::Vector3d& p) {
  return t.rotation * p + t.translation;
}

PoseSE3 boxplus(const PoseSE3& x, const TangentVector& delta) {
  const Rotation d = so3_exp(delta.tail<3>());
  return PoseSE3{d * x.rotation, d * x.translation + delta.head<3>()};
}

}  // namespace vuslam
