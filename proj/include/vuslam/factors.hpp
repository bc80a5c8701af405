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
#include <utility>

#include <Eigen/Core>

#include "vuslam/liegeom.hpp"
#include "vuslam/sensor_models.hpp"

namespace vuslam {

/// Guard radius for the range-Jacobian singularity at anchor/tag coincidence.
inline constexpr double kRangeDegenerateEps = 1e-6;

/// Default Huber thresholds on the whitened residual norm. 1.345 is the
/// classic 95%-efficiency constant for scalar residuals; 2.447 ~ sqrt of the
/// chi-square 95% quantile with 2 dof for pixel residuals.
inline constexpr double kHuberDeltaRange = 1.345;
inline constexpr double kHuberDeltaReproj = 2.447;

/// Pixel observation of a landmark from a keyframe; isotropic noise sigma_px.
struct ReprojectionFactor {
  int keyframe_id = 0;
  int landmark_id = 0;
  Eigen::Vector2d pixel{0.0, 0.0};
  double sigma_px = 1.0;
};

/// UWB range between a keyframe's tag position and an anchor.
struct RangeFactor {
  int keyframe_id = 0;
  int anchor_id = 0;
  double range_m = 0.0;
  double sigma_m = 0.01;
};

/// Huber loss on the whitened residual norm (threshold is unitless).
struct HuberLoss {
  double delta = 1.345;

  /// Input is the squared whitened residual norm. Returns {rho, weight}:
  /// rho = r^2 inside the threshold, 2*delta*r - delta^2 outside;
  /// weight = 1 inside, delta/r outside (weight <= 1 always).
  std::pair<double, double> evaluate(double r2) const;
};

std::pair<double, double> huber_weight(double r2, double delta);

/// Reprojection residual z - h(p_C) (measured minus predicted, pixels).
/// Empty when the landmark is behind the camera.
std::optional<Eigen::Vector2d> reproj_error(const PoseSE3& x_v,
                                            const Extrinsics& ext,
                                            const CameraIntrinsics& k,
                                            const Eigen::Vector3d& p_l,
                                            const Eigen::Vector2d& z);

/// d(reproj residual)/d(pose disturbance), columns ordered [dt; dw].
std::optional<Eigen::Matrix<double, 2, 6>> reproj_jac_pose(
    const PoseSE3& x_v, const Extrinsics& ext, const CameraIntrinsics& k,
    const Eigen::Vector3d& p_l);

/// d(reproj residual)/d(landmark position).
std::optional<Eigen::Matrix<double, 2, 3>> reproj_jac_landmark(
    const PoseSE3& x_v, const Extrinsics& ext, const CameraIntrinsics& k,
    const Eigen::Vector3d& p_l);

/// Range residual D - ||p_anchor - body_center(X)|| (meters).
double range_error(const PoseSE3& x_v, const Eigen::Vector3d& p_anchor,
                   double measured_range);

/// d(range residual)/d(pose disturbance), columns [dt; dw]. The rotation
/// block is exactly zero: under the body-frame left perturbation the tag
/// position is invariant to a pure rotation disturbance. Empty when anchor
/// and tag coincide within kRangeDegenerateEps.
std::optional<Eigen::Matrix<double, 1, 6>> range_jac_pose(
    const PoseSE3& x_v, const Eigen::Vector3d& p_anchor);

/// d(range residual)/d(anchor position): -(p_anchor - p_body)^T / distance.
std::optional<Eigen::Matrix<double, 1, 3>> range_jac_anchor(
    const PoseSE3& x_v, const Eigen::Vector3d& p_anchor);

}  // namespace vuslam
