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
#include "vuslam/lsq_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "vuslam/errors.hpp"

namespace vuslam {

namespace {

constexpr double kLambdaMax = 1e10;
constexpr double kLambdaMin = 1e-12;
constexpr double kGradientFloor = 1e-14;

bool is_fixed(const std::map<int, bool>& flags, int id) {
  auto it = flags.find(id);
  return it != flags.end() && it->second;
}

}  // namespace

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kConverged:
      return "converged";
    case TerminationReason::kMaxIterations:
      return "max-iter";
    case TerminationReason::kStalled:
      return "stalled";
  }
  return "unknown";
}

void Problem::add_pose(int id, const PoseSE3& pose, bool fixed) {
  poses[id] = pose;
  pose_fixed[id] = fixed;
}

void Problem::add_landmark(int id, const Eigen::Vector3d& p, bool fixed) {
  landmarks[id] = p;
  landmark_fixed[id] = fixed;
}

void Problem::add_anchor(int id, const Eigen::Vector3d& p, bool fixed) {
  anchors[id] = p;
  anchor_fixed[id] = fixed;
}

bool Problem::any_fixed() const {
  auto any = [](const std::map<int, bool>& flags) {
    return std::any_of(flags.begin(), flags.end(),
                       [](const auto& kv) { return kv.second; });
  };
  return any(pose_fixed) || any(landmark_fixed) || any(anchor_fixed);
}

void Problem::validate() const {
  for (const auto& f : reproj_factors) {
    if (!poses.count(f.keyframe_id))
      throw std::invalid_argument("reprojection factor references missing pose " +
                                  std::to_string(f.keyframe_id));
    if (!landmarks.count(f.landmark_id))
      throw std::invalid_argument(
          "reprojection factor references missing landmark " +
          std::to_string(f.landmark_id));
    if (f.sigma_px <= 0.0)
      throw std::invalid_argument("reprojection factor sigma must be > 0");
  }
  for (const auto& f : range_factors) {
    if (!poses.count(f.keyframe_id))
      throw std::invalid_argument("range factor references missing pose " +
                                  std::to_string(f.keyframe_id));
    if (!anchors.count(f.anchor_id))
      throw std::invalid_argument("range factor references missing anchor " +
                                  std::to_string(f.anchor_id));
    if (f.sigma_m <= 0.0)
      throw std::invalid_argument("range factor sigma must be > 0");
    if (f.range_m < 0.0)
      throw std::invalid_argument("range factor measurement must be >= 0");
  }
}

CostReport total_cost(const Problem& problem) {
  CostReport report;
  for (const auto& f : problem.reproj_factors) {
    const auto e = reproj_error(problem.poses.at(f.keyframe_id),
                                problem.extrinsics, problem.camera,
                                problem.landmarks.at(f.landmark_id), f.pixel);
    if (!e) {
      ++report.invalid_factors;
      continue;
    }
    const double r2 = e->squaredNorm() / (f.sigma_px * f.sigma_px);
    report.cost += problem.reproj_loss.evaluate(r2).first;
  }
  for (const auto& f : problem.range_factors) {
    const double e = range_error(problem.poses.at(f.keyframe_id),
                                 problem.anchors.at(f.anchor_id), f.range_m);
    const double r2 = (e * e) / (f.sigma_m * f.sigma_m);
    report.cost += problem.range_loss.evaluate(r2).first;
  }
  return report;
}

LinearSystem linearize(const Problem& problem) {
  LinearSystem sys;
  int offset = 0;
  for (const auto& [id, pose] : problem.poses) {
    (void)pose;
    if (is_fixed(problem.pose_fixed, id)) continue;
    sys.pose_offset[id] = offset;
    offset += 6;
  }
  for (const auto& [id, p] : problem.landmarks) {
    (void)p;
    if (is_fixed(problem.landmark_fixed, id)) continue;
    sys.landmark_offset[id] = offset;
    offset += 3;
  }
  for (const auto& [id, p] : problem.anchors) {
    (void)p;
    if (is_fixed(problem.anchor_fixed, id)) continue;
    sys.anchor_offset[id] = offset;
    offset += 3;
  }
  sys.dimension = offset;
  sys.b = Eigen::VectorXd::Zero(offset);
  sys.h.resize(offset, offset);
  if (offset == 0) return sys;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(64 * (problem.reproj_factors.size() +
                         problem.range_factors.size()));

  auto add_block = [&triplets](int row, int col,
                               const Eigen::Ref<const Eigen::MatrixXd>& m) {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        triplets.emplace_back(row + r, col + c, m(r, c));
  };
  // Exactly symmetric diagonal blocks keep H symmetric bit-for-bit.
  auto symmetrized = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return 0.5 * (m + m.transpose());
  };

  for (const auto& f : problem.reproj_factors) {
    const PoseSE3& pose = problem.poses.at(f.keyframe_id);
    const Eigen::Vector3d& lm = problem.landmarks.at(f.landmark_id);
    const auto e = reproj_error(pose, problem.extrinsics, problem.camera, lm,
                                f.pixel);
    if (!e) continue;
    const double inv_var = 1.0 / (f.sigma_px * f.sigma_px);
    const double w =
        problem.reproj_loss.evaluate(e->squaredNorm() * inv_var).second;
    const double scale = w * inv_var;

    const bool pose_free = sys.pose_offset.count(f.keyframe_id) > 0;
    const bool lm_free = sys.landmark_offset.count(f.landmark_id) > 0;
    if (!pose_free && !lm_free) continue;

    Eigen::Matrix<double, 2, 6> jp;
    Eigen::Matrix<double, 2, 3> jl;
    if (pose_free) {
      const auto j = reproj_jac_pose(pose, problem.extrinsics, problem.camera, lm);
      if (!j) continue;
      jp = *j;
    }
    if (lm_free) {
      const auto j =
          reproj_jac_landmark(pose, problem.extrinsics, problem.camera, lm);
      if (!j) continue;
      jl = *j;
    }
    if (pose_free) {
      const int po = sys.pose_offset.at(f.keyframe_id);
      add_block(po, po, symmetrized(scale * (jp.transpose() * jp)));
      sys.b.segment<6>(po) += scale * (jp.transpose() * *e);
    }
    if (lm_free) {
      const int lo = sys.landmark_offset.at(f.landmark_id);
      add_block(lo, lo, symmetrized(scale * (jl.transpose() * jl)));
      sys.b.segment<3>(lo) += scale * (jl.transpose() * *e);
    }
    if (pose_free && lm_free) {
      const int po = sys.pose_offset.at(f.keyframe_id);
      const int lo = sys.landmark_offset.at(f.landmark_id);
      const Eigen::Matrix<double, 6, 3> cross = scale * (jp.transpose() * jl);
      add_block(po, lo, cross);
      add_block(lo, po, cross.transpose());
    }
  }

  for (const auto& f : problem.range_factors) {
    const PoseSE3& pose = problem.poses.at(f.keyframe_id);
    const Eigen::Vector3d& anchor = problem.anchors.at(f.anchor_id);
    const auto jp = range_jac_pose(pose, anchor);
    if (!jp) continue;  // degenerate geometry, skipped this iteration
    const double e = range_error(pose, anchor, f.range_m);
    const double inv_var = 1.0 / (f.sigma_m * f.sigma_m);
    const double w = problem.range_loss.evaluate(e * e * inv_var).second;
    const double scale = w * inv_var;

    const bool pose_free = sys.pose_offset.count(f.keyframe_id) > 0;
    const bool anchor_free = sys.anchor_offset.count(f.anchor_id) > 0;
    if (!pose_free && !anchor_free) continue;
    const Eigen::Matrix<double, 1, 3> ja = *range_jac_anchor(pose, anchor);

    if (pose_free) {
      const int po = sys.pose_offset.at(f.keyframe_id);
      add_block(po, po, symmetrized(scale * (jp->transpose() * *jp)));
      sys.b.segment<6>(po) += scale * (jp->transpose() * e);
    }
    if (anchor_free) {
      const int ao = sys.anchor_offset.at(f.anchor_id);
      add_block(ao, ao, symmetrized(scale * (ja.transpose() * ja)));
      sys.b.segment<3>(ao) += scale * (ja.transpose() * e);
    }
    if (pose_free && anchor_free) {
      const int po = sys.pose_offset.at(f.keyframe_id);
      const int ao = sys.anchor_offset.at(f.anchor_id);
      const Eigen::Matrix<double, 6, 3> cross =
          scale * (jp->transpose() * ja);
      add_block(po, ao, cross);
      add_block(ao, po, cross.transpose());
    }
  }

  sys.h.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

namespace {

struct SavedState {
  std::map<int, PoseSE3> poses;
  std::map<int, Eigen::Vector3d> landmarks;
  std::map<int, Eigen::Vector3d> anchors;
};

SavedState save(const Problem& p) {
  return SavedState{p.poses, p.landmarks, p.anchors};
}

void restore(Problem& p, const SavedState& s) {
  p.poses = s.poses;
  p.landmarks = s.landmarks;
  p.anchors = s.anchors;
}

void apply_step(Problem& p, const LinearSystem& sys,
                const Eigen::VectorXd& delta) {
  for (const auto& [id, off] : sys.pose_offset) {
    p.poses[id] = boxplus(p.poses[id], delta.segment<6>(off));
  }
  for (const auto& [id, off] : sys.landmark_offset) {
    p.landmarks[id] += delta.segment<3>(off);
  }
  for (const auto& [id, off] : sys.anchor_offset) {
    p.anchors[id] += delta.segment<3>(off);
  }
}

// Damped normal equations (H + lambda * diag(H)) delta = -b.
bool solve_damped(const LinearSystem& sys, double lambda,
                  Eigen::VectorXd& delta) {
  Eigen::SparseMatrix<double> damped = sys.h;
  Eigen::VectorXd diag = sys.h.diagonal();
  for (int i = 0; i < sys.dimension; ++i) {
    const double d = std::max(diag[i], 1e-12);
    damped.coeffRef(i, i) = diag[i] + lambda * d;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(damped);
  if (solver.info() != Eigen::Success) return false;
  delta = solver.solve(-sys.b);
  if (solver.info() != Eigen::Success) return false;
  return delta.allFinite();
}

}  // namespace

SolveReport optimize(Problem& problem, const SolverConfig& config) {
  problem.validate();
  if (!problem.any_fixed() && !problem.allow_gauge_free) {
    throw SolverFailureError(
        "problem has no fixed variable and was not declared gauge-free");
  }

  SolveReport report;
  CostReport current = total_cost(problem);
  report.initial_cost = current.cost;
  report.cost_trace.push_back(current.cost);
  report.reason = TerminationReason::kMaxIterations;

  double lambda = config.initial_lambda;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const LinearSystem sys = linearize(problem);
    if (sys.dimension == 0) {
      report.reason = TerminationReason::kConverged;
      break;
    }
    if (sys.b.lpNorm<Eigen::Infinity>() < kGradientFloor) {
      report.reason = TerminationReason::kConverged;
      break;
    }

    const SavedState saved = save(problem);
    bool accepted = false;
    double step_norm = 0.0;
    CostReport trial;

    while (!accepted) {
      Eigen::VectorXd delta;
      if (!solve_damped(sys, lambda, delta)) {
        lambda *= config.lambda_up;
        if (lambda > kLambdaMax) {
          report.final_cost = current.cost;
          report.invalid_factors = current.invalid_factors;
          report.reason = TerminationReason::kStalled;
          return report;
        }
        continue;
      }
      apply_step(problem, sys, delta);
      trial = total_cost(problem);
      if (trial.cost < current.cost) {
        accepted = true;
        step_norm = delta.norm();
        lambda = std::max(lambda / config.lambda_down, kLambdaMin);
      } else {
        restore(problem, saved);
        lambda *= config.lambda_up;
        if (config.trace) {
          *config.trace << "iter " << iter + 1 << " cost " << current.cost
                        << " lambda " << lambda << " step_norm " << delta.norm()
                        << " status reject\n";
        }
        if (lambda > kLambdaMax) {
          report.final_cost = current.cost;
          report.invalid_factors = current.invalid_factors;
          report.reason = TerminationReason::kStalled;
          return report;
        }
      }
    }

    ++report.iterations;
    const double decrease = current.cost - trial.cost;
    current = trial;
    report.cost_trace.push_back(current.cost);
    if (config.trace) {
      *config.trace << "iter " << iter + 1 << " cost " << current.cost
                    << " lambda " << lambda << " step_norm " << step_norm
                    << " status accept\n";
    }

    if (step_norm < config.update_tolerance ||
        decrease <= config.cost_tolerance * std::max(current.cost, 1e-300)) {
      report.reason = TerminationReason::kConverged;
      break;
    }
  }

  report.final_cost = current.cost;
  report.invalid_factors = current.invalid_factors;
  return report;
}

}  // namespace vuslam
