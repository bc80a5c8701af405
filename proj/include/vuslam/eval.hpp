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

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "vuslam/liegeom.hpp"

namespace vuslam {

/// One timestamped trajectory sample (pose stored world->body as elsewhere).
struct TrajectorySample {
  double timestamp = 0.0;
  PoseSE3 pose;
};

/// Similarity (or rigid, s = 1) registration result: gt ~ s * R * est + t.
struct AlignmentResult {
  double scale = 1.0;
  Rotation rotation;
  Eigen::Vector3d translation{0.0, 0.0, 0.0};
  int pair_count = 0;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return scale * (rotation * p) + translation;
  }
};

struct ErrorStats {
  double mean = 0.0;
  double rmse = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  int count = 0;
};

/// Position pairs (est, gt) matched by nearest timestamp within the window;
/// each ground-truth sample is used at most once.
std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> match_by_timestamp(
    const std::vector<TrajectorySample>& est,
    const std::vector<TrajectorySample>& gt, double window_s = 0.02);

/// Closed-form least-squares registration minimizing
/// sum ||gt_i - (s R est_i + t)||^2. with_scale=false forces s=1; the
/// reflection case is corrected so det(R) = +1.
/// Throws InsufficientPairsError (< 3 pairs) or CollinearityError.
AlignmentResult umeyama_align(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    bool with_scale);

/// Per-pair translation errors ||gt_i - align(est_i)|| and their statistics.
ErrorStats ate(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    const AlignmentResult& alignment);

/// Same as ate() but returns the per-pair errors (for the error-vs-time CSV).
std::vector<double> per_pair_errors(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    const AlignmentResult& alignment);

struct AnchorErrorReport {
  std::map<int, double> per_id;
  double mean = 0.0;
};

/// Anchor errors under the trajectory's 6DoF alignment (never a separate
/// anchor-only fit). Throws IdMismatchError when the id sets differ.
AnchorErrorReport anchor_errors(
    const std::map<int, Eigen::Vector3d>& est_anchors,
    const std::map<int, Eigen::Vector3d>& gt_anchors,
    const AlignmentResult& alignment);

/// Residual scale error |1 - s| from a 7DoF alignment of the matched pairs.
double scale_error(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs);

}  // namespace vuslam
