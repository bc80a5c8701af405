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
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "vuslam/factors.hpp"
#include "vuslam/liegeom.hpp"
#include "vuslam/sensor_models.hpp"

namespace vuslam {

struct SolverConfig {
  int max_iterations = 20;
  double cost_tolerance = 1e-6;      // relative cost decrease
  double initial_lambda = 1e-4;      // LM damping
  double lambda_up = 10.0;           // on rejected step
  double lambda_down = 10.0;         // on accepted step
  double update_tolerance = 1e-8;    // step norm
  std::ostream* trace = nullptr;     // per-iteration log lines, optional
};

enum class TerminationReason { kConverged, kMaxIterations, kStalled };

std::string to_string(TerminationReason reason);

struct SolveReport {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  TerminationReason reason = TerminationReason::kConverged;
  std::vector<double> cost_trace;  // accepted costs, nonincreasing
  int invalid_factors = 0;         // behind-camera count at the final state
};

/// Variable/factor problem for the joint robust least squares (reprojection
/// plus range terms). Pose blocks are 6-wide on the tangent space, point
/// blocks 3-wide; fixed variables contribute factors but no columns.
struct Problem {
  CameraIntrinsics camera;
  Extrinsics extrinsics;

  std::map<int, PoseSE3> poses;
  std::map<int, Eigen::Vector3d> landmarks;
  std::map<int, Eigen::Vector3d> anchors;

  std::map<int, bool> pose_fixed;
  std::map<int, bool> landmark_fixed;
  std::map<int, bool> anchor_fixed;

  std::vector<ReprojectionFactor> reproj_factors;
  std::vector<RangeFactor> range_factors;

  HuberLoss reproj_loss{kHuberDeltaReproj};
  HuberLoss range_loss{kHuberDeltaRange};

  /// Rank-deficient gauges are refused unless the caller opts in.
  bool allow_gauge_free = false;

  void add_pose(int id, const PoseSE3& pose, bool fixed = false);
  void add_landmark(int id, const Eigen::Vector3d& p, bool fixed = false);
  void add_anchor(int id, const Eigen::Vector3d& p, bool fixed = false);

  bool any_fixed() const;

  /// Throws std::invalid_argument if a factor references a missing key.
  void validate() const;
};

struct CostReport {
  double cost = 0.0;
  int invalid_factors = 0;
};

/// Robustified total cost: sum of huber(whitened residual^2) over valid
/// factors; behind-camera factors contribute zero and are counted.
CostReport total_cost(const Problem& problem);

/// Normal-equation system over the free-variable tangent dimensions:
/// H = sum J^T w Sigma^-1 J, b = sum J^T w Sigma^-1 e.
struct LinearSystem {
  Eigen::SparseMatrix<double> h;
  Eigen::VectorXd b;
  /// Column offsets of free variables: poses first (6-wide), then landmarks
  /// and anchors (3-wide), each ordered by ascending id.
  std::map<int, int> pose_offset;
  std::map<int, int> landmark_offset;
  std::map<int, int> anchor_offset;
  int dimension = 0;
};

LinearSystem linearize(const Problem& problem);

/// Gauss-Newton with multiplicative Levenberg-Marquardt damping. Mutates the
/// problem variables in place; accepted steps strictly decrease the cost and
/// rejected steps restore the saved state exactly.
SolveReport optimize(Problem& problem, const SolverConfig& config);

}  // namespace vuslam
