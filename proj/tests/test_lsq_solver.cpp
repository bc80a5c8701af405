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
#include <algorithm>
#include <random>

#include <doctest.h>
#include <Eigen/Dense>

#include "test_util.hpp"
#include "vuslam/errors.hpp"
#include "vuslam/lsq_solver.hpp"

using namespace vuslam;
using namespace vuslam::testing;

namespace {

CameraIntrinsics test_camera() {
  CameraIntrinsics k;
  k.fu = 500.0;
  k.fv = 500.0;
  k.cu = 320.0;
  k.cv = 240.0;
  k.width = 640.0;
  k.height = 480.0;
  k.min_depth = 0.05;
  k.max_depth = 100.0;
  return k;
}

// Closed-form multilateration: subtracting the first squared-range equation
// from the others yields a linear system in the unknown position.
Eigen::Vector3d trilaterate(const std::vector<Eigen::Vector3d>& anchors,
                            const std::vector<double>& ranges) {
  const int n = static_cast<int>(anchors.size());
  Eigen::MatrixXd a(n - 1, 3);
  Eigen::VectorXd rhs(n - 1);
  for (int i = 1; i < n; ++i) {
    a.row(i - 1) = 2.0 * (anchors[i] - anchors[0]).transpose();
    rhs[i - 1] = ranges[0] * ranges[0] - ranges[i] * ranges[i] +
                 anchors[i].squaredNorm() - anchors[0].squaredNorm();
  }
  return a.colPivHouseholderQr().solve(rhs);
}

// Noiseless toy bundle adjustment scene: 3 poses, 20 landmarks, 2 anchors.
struct ToyScene {
  Problem problem;
  std::map<int, PoseSE3> true_poses;
  std::map<int, Eigen::Vector3d> true_landmarks;
  std::map<int, Eigen::Vector3d> true_anchors;
};

ToyScene make_toy_scene(unsigned seed, bool perturb) {
  ToyScene scene;
  Problem& p = scene.problem;
  p.camera = test_camera();
  p.extrinsics.t_cb.translation = Eigen::Vector3d(0.02, -0.01, 0.005);

  std::mt19937_64 rng(seed);

  // Poses looking down +z, translated sideways for parallax.
  for (int i = 0; i < 3; ++i) {
    PoseSE3 pose;
    pose.rotation = so3_exp(Eigen::Vector3d(0.02 * i, -0.03 * i, 0.01));
    pose.translation = Eigen::Vector3d(0.4 * i, 0.1 * i, 0.05 * i);
    scene.true_poses[i] = pose;
  }
  std::uniform_real_distribution<double> dxy(-1.5, 1.5);
  std::uniform_real_distribution<double> dz(4.0, 8.0);
  for (int j = 0; j < 20; ++j) {
    scene.true_landmarks[j] = Eigen::Vector3d(dxy(rng), dxy(rng), dz(rng));
  }
  scene.true_anchors[0] = Eigen::Vector3d(0.0, 0.0, 0.0);
  scene.true_anchors[1] = Eigen::Vector3d(2.0, -1.0, 1.0);

  for (const auto& [i, pose] : scene.true_poses) {
    // First pose pinned as the gauge.
    p.add_pose(i, pose, i == 0);
  }
  for (const auto& [j, lm] : scene.true_landmarks) p.add_landmark(j, lm);
  p.add_anchor(0, scene.true_anchors.at(0), true);
  p.add_anchor(1, scene.true_anchors.at(1));

  for (const auto& [i, pose] : scene.true_poses) {
    for (const auto& [j, lm] : scene.true_landmarks) {
      const auto z = pinhole_project(world_to_camera(pose, p.extrinsics, lm),
                                     p.camera);
      REQUIRE(z.has_value());
      p.reproj_factors.push_back(ReprojectionFactor{i, j, *z, 1.0});
    }
    for (const auto& [k, anchor] : scene.true_anchors) {
      p.range_factors.push_back(RangeFactor{
          i, k, range_truth(anchor, body_center(pose)), 0.01});
    }
  }

  if (perturb) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& [i, pose] : p.poses) {
      if (p.pose_fixed[i]) continue;
      TangentVector d;
      for (int k = 0; k < 3; ++k) d[k] = 0.05 * u(rng);
      for (int k = 3; k < 6; ++k) d[k] = 0.02 * u(rng);
      pose = boxplus(pose, d);
    }
    for (auto& [j, lm] : p.landmarks) {
      if (p.landmark_fixed[j]) continue;
      lm += 0.05 * Eigen::Vector3d(u(rng), u(rng), u(rng));
    }
    for (auto& [k, a] : p.anchors) {
      if (p.anchor_fixed[k]) continue;
      a += 0.05 * Eigen::Vector3d(u(rng), u(rng), u(rng));
    }
  }
  return scene;
}

}  // namespace

TEST_SUITE("lsq_solver") {

TEST_CASE("total_cost named cases") {
  Problem p;
  p.camera = test_camera();
  CHECK(total_cost(p).cost == 0.0);

  p.add_pose(0, PoseSE3::identity(), true);
  p.add_anchor(0, Eigen::Vector3d(3, 4, 0), true);
  p.range_factors.push_back(RangeFactor{0, 0, 5.0, 0.01});
  CHECK(total_cost(p).cost == doctest::Approx(0.0));

  // Residual 0.02 m, sigma 0.01, inside the Huber knee -> (0.02/0.01)^2 = 4.
  p.range_factors[0].range_m = 5.02;
  p.range_loss.delta = 1e6;
  CHECK(total_cost(p).cost == doctest::Approx(4.0));
}

TEST_CASE("behind-camera factors contribute zero and are counted") {
  Problem p;
  p.camera = test_camera();
  p.add_pose(0, PoseSE3::identity(), true);
  p.add_landmark(5, Eigen::Vector3d(0, 0, -3.0));
  p.reproj_factors.push_back(
      ReprojectionFactor{0, 5, Eigen::Vector2d(100, 100), 1.0});
  const CostReport r = total_cost(p);
  CHECK(r.cost == 0.0);
  CHECK(r.invalid_factors == 1);
}

TEST_CASE("linearize: all variables fixed gives empty system") {
  Problem p;
  p.camera = test_camera();
  p.add_pose(0, PoseSE3::identity(), true);
  p.add_anchor(0, Eigen::Vector3d(1, 2, 3), true);
  p.range_factors.push_back(RangeFactor{0, 0, 3.0, 0.01});
  const LinearSystem sys = linearize(p);
  CHECK(sys.dimension == 0);
}

TEST_CASE("linearize: single free anchor equals hand-assembled normal matrix") {
  Problem p;
  p.camera = test_camera();
  const Eigen::Vector3d anchor(1.0, 2.0, 0.5);
  std::vector<PoseSE3> poses(3);
  poses[0].translation = Eigen::Vector3d(-3, 0, 0);
  poses[1].translation = Eigen::Vector3d(0, -4, 0);
  poses[2].translation = Eigen::Vector3d(1, 1, -5);
  const double sigma = 0.02;
  for (int i = 0; i < 3; ++i) {
    p.add_pose(i, poses[i], true);
    p.range_factors.push_back(RangeFactor{
        i, 7, range_truth(anchor, body_center(poses[i])) + 0.001, sigma});
  }
  p.add_anchor(7, anchor);
  p.range_loss.delta = 1e9;  // keep every factor in the quadratic regime

  const LinearSystem sys = linearize(p);
  REQUIRE(sys.dimension == 3);

  Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    const auto row = range_jac_anchor(poses[i], anchor);
    REQUIRE(row.has_value());
    expected += row->transpose() * *row / (sigma * sigma);
  }
  CHECK((Eigen::MatrixXd(sys.h) - expected).norm() < 1e-9);
}

TEST_CASE("linearize: H is symmetric") {
  ToyScene scene = make_toy_scene(99, true);
  const LinearSystem sys = linearize(scene.problem);
  const Eigen::MatrixXd h(sys.h);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("optimize: already at a zero-residual optimum") {
  ToyScene scene = make_toy_scene(1, false);
  SolverConfig cfg;
  const SolveReport report = optimize(scene.problem, cfg);
  CHECK(report.iterations <= 1);
  CHECK(report.final_cost <= 1e-18);
  CHECK(report.reason == TerminationReason::kConverged);
}

TEST_CASE("optimize: multilateration against closed-form oracle") {
  // Free body position via a pose whose rotation has no gradient (ranges
  // only); four noncoplanar fixed anchors with exact ranges.
  const std::vector<Eigen::Vector3d> anchors = {
      {0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
  const Eigen::Vector3d truth(2.0, 3.0, 1.5);
  std::vector<double> ranges;
  for (const auto& a : anchors) ranges.push_back((a - truth).norm());

  // Closed-form oracle confirms the constructed solution.
  const Eigen::Vector3d oracle = trilaterate(anchors, ranges);
  REQUIRE((oracle - truth).norm() < 1e-9);

  Problem p;
  p.camera = test_camera();
  PoseSE3 guess;
  guess.translation = -(truth + Eigen::Vector3d(0.3, -0.3, 0.2));  // 0.5m off
  p.add_pose(0, guess);
  for (int k = 0; k < 4; ++k) {
    p.add_anchor(k, anchors[k], true);
    p.range_factors.push_back(RangeFactor{0, k, ranges[k], 0.01});
  }
  SolverConfig cfg;
  cfg.max_iterations = 50;
  const SolveReport report = optimize(p, cfg);
  CHECK(report.final_cost < 1e-12);
  CHECK((body_center(p.poses.at(0)) - oracle).norm() < 1e-6);
}

TEST_CASE("optimize: noiseless toy bundle adjustment recovers ground truth") {
  ToyScene scene = make_toy_scene(42, true);
  SolverConfig cfg;
  cfg.max_iterations = 100;
  cfg.cost_tolerance = 1e-16;
  cfg.update_tolerance = 1e-14;
  const SolveReport report = optimize(scene.problem, cfg);
  CHECK(report.final_cost <= 1e-10);

  // RMS residual <= 1e-8 at the solution.
  const int residual_count =
      2 * static_cast<int>(scene.problem.reproj_factors.size()) +
      static_cast<int>(scene.problem.range_factors.size());
  CHECK(std::sqrt(report.final_cost / residual_count) <= 1e-8);
}

TEST_CASE("optimize: accepted cost trace is nonincreasing") {
  ToyScene scene = make_toy_scene(7, true);
  SolverConfig cfg;
  const SolveReport report = optimize(scene.problem, cfg);
  REQUIRE(report.cost_trace.size() >= 2);
  for (size_t i = 1; i < report.cost_trace.size(); ++i) {
    CHECK(report.cost_trace[i] <= report.cost_trace[i - 1]);
  }
  CHECK(report.final_cost <= report.initial_cost);
}

TEST_CASE("optimize: fixed variables are bit-identical afterwards") {
  ToyScene scene = make_toy_scene(21, true);
  const PoseSE3 fixed_before = scene.problem.poses.at(0);
  const Eigen::Vector3d anchor_before = scene.problem.anchors.at(0);
  SolverConfig cfg;
  optimize(scene.problem, cfg);
  const PoseSE3 fixed_after = scene.problem.poses.at(0);
  CHECK(fixed_after.translation == fixed_before.translation);
  CHECK(fixed_after.rotation.quat().coeffs() ==
        fixed_before.rotation.quat().coeffs());
  CHECK(scene.problem.anchors.at(0) == anchor_before);
}

TEST_CASE("optimize: factor order does not change the result") {
  ToyScene a = make_toy_scene(77, true);
  ToyScene b = make_toy_scene(77, true);
  std::reverse(b.problem.reproj_factors.begin(),
               b.problem.reproj_factors.end());
  std::reverse(b.problem.range_factors.begin(), b.problem.range_factors.end());
  SolverConfig cfg;
  const SolveReport ra = optimize(a.problem, cfg);
  const SolveReport rb = optimize(b.problem, cfg);
  const double scale = std::max({ra.final_cost, rb.final_cost, 1e-12});
  CHECK(std::abs(ra.final_cost - rb.final_cost) / scale < 1e-9);
}

TEST_CASE("optimize refuses a gauge-free problem unless declared") {
  Problem p;
  p.camera = test_camera();
  p.add_pose(0, PoseSE3::identity());
  p.add_anchor(0, Eigen::Vector3d(1, 0, 0));
  p.range_factors.push_back(RangeFactor{0, 0, 1.0, 0.01});
  SolverConfig cfg;
  CHECK_THROWS_AS(optimize(p, cfg), SolverFailureError);
  p.allow_gauge_free = true;
  CHECK_NOTHROW(optimize(p, cfg));
}

TEST_CASE("validate rejects dangling factor references") {
  Problem p;
  p.camera = test_camera();
  p.add_pose(0, PoseSE3::identity(), true);
  p.range_factors.push_back(RangeFactor{0, 99, 1.0, 0.01});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}  // TEST_SUITE
