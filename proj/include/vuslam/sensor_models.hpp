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

#include <optional>

#include <Eigen/Core>

#include "vuslam/liegeom.hpp"

namespace vuslam {

/// Pinhole intrinsics plus the visibility window used by the simulator.
struct CameraIntrinsics {
  double fu = 460.0;
  double fv = 460.0;
  double cu = 376.0;
  double cv = 240.0;
  double width = 752.0;
  double height = 480.0;
  double min_depth = 0.2;
  double max_depth = 40.0;

  bool valid() const {
    return fu > 0.0 && fv > 0.0 && cu > 0.0 && cu < width && cv > 0.0 &&
           cv < height && min_depth > 0.0 && min_depth < max_depth;
  }
};

/// Body-to-camera transform: p_C = R_CB * p_B + t_CB.
struct Extrinsics {
  PoseSE3 t_cb;
};

/// Projects a camera-frame point to pixels. Empty when Z_C <= 0 (point is
/// behind the camera; callers treat the measurement as invalid).
std::optional<Eigen::Vector2d> pinhole_project(const Eigen::Vector3d& p_c,
                                               const CameraIntrinsics& k);

/// Chains world -> body -> camera.
Eigen::Vector3d world_to_camera(const PoseSE3& x_v, const Extrinsics& ext,
                                const Eigen::Vector3d& p_w);

/// UWB tag position (body frame origin) in world coordinates.
Eigen::Vector3d body_center(const PoseSE3& x_v);

/// Noiseless range model: ||p_anchor - p_body||.
double range_truth(const Eigen::Vector3d& p_anchor,
                   const Eigen::Vector3d& p_body);

/// Simulator visibility rule: depth inside (min_depth, max_depth) and the
/// noiseless projection inside [0,width] x [0,height].
bool landmark_visible(const PoseSE3& x_v, const Extrinsics& ext,
                      const CameraIntrinsics& k, const Eigen::Vector3d& p_w);

}  // namespace vuslam
