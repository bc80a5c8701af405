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
#include "vuslam/eval.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "vuslam/errors.hpp"
#include "vuslam/sensor_models.hpp"

namespace vuslam {

std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> match_by_timestamp(
    const std::vector<TrajectorySample>& est,
    const std::vector<TrajectorySample>& gt, double window_s) {
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> pairs;
  pairs.reserve(est.size());
  size_t cursor = 0;  // first unused gt sample (both streams time-sorted)
  for (const auto& e : est) {
    // Advance to the nearest unused gt sample.
    while (cursor + 1 < gt.size() &&
           std::abs(gt[cursor + 1].timestamp - e.timestamp) <=
               std::abs(gt[cursor].timestamp - e.timestamp)) {
      ++cursor;
    }
    if (cursor >= gt.size()) break;
    if (std::abs(gt[cursor].timestamp - e.timestamp) <= window_s) {
      pairs.emplace_back(body_center(e.pose), body_center(gt[cursor].pose));
      ++cursor;
      if (cursor >= gt.size()) break;
    }
  }
  return pairs;
}

AlignmentResult umeyama_align(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    bool with_scale) {
  const int n = static_cast<int>(pairs.size());
  if (n < 3) {
    throw InsufficientPairsError(
        "umeyama alignment needs at least 3 correspondence pairs, got " +
        std::to_string(n));
  }

  Eigen::Vector3d mean_est = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_gt = Eigen::Vector3d::Zero();
  for (const auto& [e, g] : pairs) {
    mean_est += e;
    mean_gt += g;
  }
  mean_est /= n;
  mean_gt /= n;

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  double var_est = 0.0;
  for (const auto& [e, g] : pairs) {
    cross += (g - mean_gt) * (e - mean_est).transpose();
    var_est += (e - mean_est).squaredNorm();
  }
  cross /= n;
  var_est /= n;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d d = svd.singularValues();
  if (d[0] <= 0.0 || d[1] / d[0] < 1e-9) {
    throw CollinearityError(
        "correspondences are collinear; alignment is not unique");
  }

  Eigen::Vector3d s_fix = Eigen::Vector3d::Ones();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    s_fix[2] = -1.0;
  }
  const Eigen::Matrix3d r = svd.matrixU() * s_fix.asDiagonal() *
                            svd.matrixV().transpose();

  AlignmentResult result;
  result.rotation = Rotation::from_matrix(r);
  result.scale = with_scale ? (d.dot(s_fix) / var_est) : 1.0;
  result.translation = mean_gt - result.scale * (r * mean_est);
  result.pair_count = n;
  return result;
}

std::vector<double> per_pair_errors(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    const AlignmentResult& alignment) {
  std::vector<double> errors;
  errors.reserve(pairs.size());
  for (const auto& [e, g] : pairs) {
    errors.push_back((g - alignment.apply(e)).norm());
  }
  return errors;
}

ErrorStats ate(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs,
    const AlignmentResult& alignment) {
  if (pairs.empty()) {
    throw NoOverlapError("no matched trajectory pairs to evaluate");
  }
  std::vector<double> errors = per_pair_errors(pairs, alignment);

  ErrorStats stats;
  stats.count = static_cast<int>(errors.size());
  double sum = 0.0, sum2 = 0.0;
  for (double e : errors) {
    sum += e;
    sum2 += e * e;
  }
  stats.mean = sum / stats.count;
  stats.rmse = std::sqrt(sum2 / stats.count);
  std::sort(errors.begin(), errors.end());
  stats.min = errors.front();
  stats.max = errors.back();
  stats.median = errors[errors.size() / 2];
  return stats;
}

AnchorErrorReport anchor_errors(
    const std::map<int, Eigen::Vector3d>& est_anchors,
    const std::map<int, Eigen::Vector3d>& gt_anchors,
    const AlignmentResult& alignment) {
  if (est_anchors.size() != gt_anchors.size()) {
    throw IdMismatchError("anchor id sets differ in size");
  }
  AnchorErrorReport report;
  for (const auto& [id, est] : est_anchors) {
    auto gt = gt_anchors.find(id);
    if (gt == gt_anchors.end()) {
      throw IdMismatchError("anchor id " + std::to_string(id) +
                            " missing from ground truth");
    }
    const double err = (gt->second - alignment.apply(est)).norm();
    report.per_id[id] = err;
    report.mean += err;
  }
  report.mean /= static_cast<double>(report.per_id.size());
  return report;
}

double scale_error(
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& pairs) {
  const AlignmentResult sim = umeyama_align(pairs, true);
  // sim.scale maps est onto gt; 1/s is the estimate's residual scale relative
  // to truth, which is exact for a pure scaling of the estimate (an estimate
  // that is 0.5% too large reads as 0.005).
  return std::abs(1.0 - 1.0 / sim.scale);
}

}  // namespace vuslam
