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
#include "vuslam/sensor_models.hpp"

namespace vuslam {

std::optional<Eigen::Vector2d> pinhole_project(const Eigen::Vector3d& p_c,
                                               const CameraIntrinsics& k) {
  if (p_c.z() <= 0.0) return std::nullopt;
  return Eigen::Vector2d(k.fu * p_c.x() / p_c.z() + k.cu,
                         k.fv * p_c.y() / p_c.z() + k.cv);
}

Eigen::Vector3d world_to_camera(const PoseSE3& x_v, const Extrinsics& ext,
                                const Eigen::Vector3d& p_w) {
  return transform_point(ext.t_cb, transform_point(x_v, p_w));
}

Eigen::Vector3d body_center(const PoseSE3& x_v) {
  return -(x_v.rotation.inverse() * x_v.translation);
}

double range_truth(const Eigen::Vector3d& p_anchor,
                   const Eigen::Vector3d& p_body) {
  return (p_anchor - p_body).norm();
}

bool landmark_visible(const PoseSE3& x_v, const Extrinsics& ext,
                      const CameraIntrinsics& k, const Eigen::Vector3d& p_w) {
  const Eigen::Vector3d p_c = world_to_camera(x_v, ext, p_w);
  if (p_c.z() <= k.min_depth || p_c.z() >= k.max_depth) return false;
  const auto uv = pinhole_project(p_c, k);
  if (!uv) return false;
  return uv->x() >= 0.0 && uv->x() <= k.width && uv->y() >= 0.0 &&
         uv->y() <= k.height;
}

}  // namespace vuslam
