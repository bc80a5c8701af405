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
#include "vuslam/factors.hpp"

#include <cmath>

namespace vuslam {

namespace {

// d h / d p_C for the pinhole model, evaluated at camera-frame coordinates.
Eigen::Matrix<double, 2, 3> projection_derivative(const Eigen::Vector3d& p_c,
                                                  const CameraIntrinsics& k) {
  const double z = p_c.z();
  const double inv_z = 1.0 / z;
  const double inv_z2 = inv_z * inv_z;
  Eigen::Matrix<double, 2, 3> d;
  // clang-format off
  d << k.fu * inv_z,          0.0, -k.fu * p_c.x() * inv_z2,
                0.0, k.fv * inv_z, -k.fv * p_c.y() * inv_z2;
  // clang-format on
  return d;
}

}  // namespace

std::pair<double, double> huber_weight(double r2, double delta) {
  const double r = std::sqrt(r2);
  if (r <= delta) return {r2, 1.0};
  return {2.0 * delta * r - delta * delta, delta / r};
}

std::pair<double, double> HuberLoss::evaluate(double r2) const {
  return huber_weight(r2, delta);
}

std::optional<Eigen::Vector2d> reproj_error(const PoseSE3& x_v,
                                            const Extrinsics& ext,
                                            const CameraIntrinsics& k,
                                            const Eigen::Vector3d& p_l,
                                            const Eigen::Vector2d& z) {
  const Eigen::Vector3d p_c = world_to_camera(x_v, ext, p_l);
  const auto predicted = pinhole_project(p_c, k);
  if (!predicted) return std::nullopt;
  return z - *predicted;
}

std::optional<Eigen::Matrix<double, 2, 6>> reproj_jac_pose(
    const PoseSE3& x_v, const Extrinsics& ext, const CameraIntrinsics& k,
    const Eigen::Vector3d& p_l) {
  const Eigen::Vector3d p_b = transform_point(x_v, p_l);
  const Eigen::Vector3d p_c = transform_point(ext.t_cb, p_b);
  if (p_c.z() <= 0.0) return std::nullopt;
  // p_B' = p_B + dt - skew(p_B) dw, chained through R_CB and the projection.
  const Eigen::Matrix<double, 2, 3> front =
      -projection_derivative(p_c, k) * ext.t_cb.rotation.matrix();
  Eigen::Matrix<double, 2, 6> j;
  j.block<2, 3>(0, 0) = front;
  j.block<2, 3>(0, 3) = front * (-skew(p_b));
  return j;
}

std::optional<Eigen::Matrix<double, 2, 3>> reproj_jac_landmark(
    const PoseSE3& x_v, const Extrinsics& ext, const CameraIntrinsics& k,
    const Eigen::Vector3d& p_l) {
  const Eigen::Vector3d p_c = world_to_camera(x_v, ext, p_l);
  if (p_c.z() <= 0.0) return std::nullopt;
  return Eigen::Matrix<double, 2, 3>(-projection_derivative(p_c, k) *
                                     ext.t_cb.rotation.matrix() *
                                     x_v.rotation.matrix());
}

double range_error(const PoseSE3& x_v, const Eigen::Vector3d& p_anchor,
                   double measured_range) {
  return measured_range - range_truth(p_anchor, body_center(x_v));
}

std::optional<Eigen::Matrix<double, 1, 6>> range_jac_pose(
    const PoseSE3& x_v, const Eigen::Vector3d& p_anchor) {
  const Eigen::Vector3d diff = p_anchor - body_center(x_v);
  const double dist = diff.norm();
  if (dist <= kRangeDegenerateEps) return std::nullopt;
  const Eigen::Vector3d unit = diff / dist;
  Eigen::Matrix<double, 1, 6> j = Eigen::Matrix<double, 1, 6>::Zero();
  // d p_b / d dt = -R_BW^T and d p_b / d dw = 0 under the left perturbation,
  // so only translation columns are populated.
  j.block<1, 3>(0, 0) = -(x_v.rotation.matrix() * unit).transpose();
  return j;
}

std::optional<Eigen::Matrix<double, 1, 3>> range_jac_anchor(
    const PoseSE3& x_v, const Eigen::Vector3d& p_anchor) {
  const Eigen::Vector3d diff = p_anchor - body_center(x_v);
  const double dist = diff.norm();
  if (dist <= kRangeDegenerateEps) return std::nullopt;
  return Eigen::Matrix<double, 1, 3>(-(diff / dist).transpose());
}

}  // namespace vuslam
