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

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vuslam/eval.hpp"
#include "vuslam/liegeom.hpp"

namespace vuslam {

struct RangeMeasurement {
  double timestamp = 0.0;
  int anchor_id = 0;
  double range_m = 0.0;
  double sigma_m = 0.01;
};

struct Observation {
  double timestamp = 0.0;
  int frame_id = 0;
  int landmark_id = 0;
  Eigen::Vector2d pixel{0.0, 0.0};
  double sigma_px = 1.0;
};

struct AnchorTruth {
  int id = 0;
  double deploy_time = 0.0;
  Eigen::Vector3d position{0.0, 0.0, 0.0};
};

struct AnchorEstimate {
  int id = 0;
  Eigen::Vector3d position{0.0, 0.0, 0.0};
  bool fixed = false;
};

/// Relative-pose constraint between keyframes: t_ij maps body-j coordinates
/// into body-i coordinates, t_ij ~ T_iW * T_jW^-1.
struct LoopEdgeRecord {
  int kf_i = 0;
  int kf_j = 0;
  PoseSE3 t_ij;
  double weight = 1.0;
};

/// The five dataset files of one simulated sequence.
struct Dataset {
  std::vector<TrajectorySample> ground_truth;
  std::vector<RangeMeasurement> ranges;
  std::vector<Observation> observations;
  std::vector<AnchorTruth> anchors_gt;
  std::vector<LoopEdgeRecord> loop_edges;
};

/// Round-trip-exact decimal formatting (17 significant digits).
std::string format_double(double v);

// Trajectory files use the TUM convention: `timestamp tx ty tz qx qy qz qw`
// per line, `#` comments. (tx,ty,tz) is the body position in world
// coordinates and the quaternion is the body->world orientation with w last
// (the inverse of the internally stored world->body rotation, which keeps w
// first).
void write_trajectory(const std::filesystem::path& path,
                      const std::vector<TrajectorySample>& samples);
std::vector<TrajectorySample> read_trajectory(
    const std::filesystem::path& path);

// ranges.csv: timestamp,anchor_id,range_m,sigma_m
void write_ranges(const std::filesystem::path& path,
                  const std::vector<RangeMeasurement>& ranges);
std::vector<RangeMeasurement> read_ranges(const std::filesystem::path& path);

// observations.csv: timestamp,frame_id,landmark_id,u_px,v_px,sigma_px
void write_observations(const std::filesystem::path& path,
                        const std::vector<Observation>& observations);
std::vector<Observation> read_observations(const std::filesystem::path& path);

// anchors_gt.csv: anchor_id,deploy_time,x,y,z
void write_anchors_gt(const std::filesystem::path& path,
                      const std::vector<AnchorTruth>& anchors);
std::vector<AnchorTruth> read_anchors_gt(const std::filesystem::path& path);

// anchors_est.csv: anchor_id,x,y,z,fixed
void write_anchors_est(const std::filesystem::path& path,
                       const std::vector<AnchorEstimate>& anchors);
std::vector<AnchorEstimate> read_anchors_est(
    const std::filesystem::path& path);

// loop_edges.csv: kf_i,kf_j,tx,ty,tz,qx,qy,qz,qw,weight (t_ij serialized
// like a trajectory row: rotation of the body-j -> body-i transform, w last).
void write_loop_edges(const std::filesystem::path& path,
                      const std::vector<LoopEdgeRecord>& edges);
std::vector<LoopEdgeRecord> read_loop_edges(const std::filesystem::path& path);

/// Writes all five dataset files into a directory.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Loads a dataset directory; throws DatasetError on missing/invalid files.
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace vuslam
