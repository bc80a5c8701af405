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

#include <stdexcept>
#include <string>

namespace vuslam {

/// Error families. Each family maps to a distinct CLI exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pipeline-family specifics.
struct InsufficientKeyframesError : PipelineError {
  using PipelineError::PipelineError;
};
struct DegenerateObservabilityError : PipelineError {
  using PipelineError::PipelineError;
};
struct UnderConstrainedError : PipelineError {
  using PipelineError::PipelineError;
};
struct TrackingLostError : PipelineError {
  using PipelineError::PipelineError;
};
struct InsufficientAnchorsError : PipelineError {
  using PipelineError::PipelineError;
};
struct GeometryDegenerateError : PipelineError {
  using PipelineError::PipelineError;
};
struct DisconnectedGraphError : PipelineError {
  using PipelineError::PipelineError;
};
struct SolverFailureError : PipelineError {
  using PipelineError::PipelineError;
};

// Evaluation-family specifics.
struct InsufficientPairsError : EvaluationError {
  using EvaluationError::EvaluationError;
};
struct CollinearityError : EvaluationError {
  using EvaluationError::EvaluationError;
};
struct NoOverlapError : EvaluationError {
  using EvaluationError::EvaluationError;
};
struct IdMismatchError : EvaluationError {
  using EvaluationError::EvaluationError;
};

}  // namespace vuslam
