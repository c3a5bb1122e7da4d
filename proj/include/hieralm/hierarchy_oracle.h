// Copyright 2026 The hieralm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERALM_HIERARCHY_ORACLE_H_
#define HIERALM_HIERARCHY_ORACLE_H_

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "hieralm/problem_model.h"

namespace hieralm {

// Exact hierarchically optimal shift, computed by lexicographic least squares.
//
// Stage 1 minimizes ||b1 - A1 x|| over all x; stage 2 minimizes ||b2 - A2 x||
// over the stage-1 optimal set {x : A1 x = A1 x_dag}. The shifts
// s1* = b1 - A1 x_dag and s2* = b2 - A2 x_ddag are unique even though the
// minimizers are not; the minimum-norm minimizers are returned.
struct OracleResult {
  HierarchicalShift shift;  // kind == kOracleExact
  Eigen::VectorXd x_dag;
  Eigen::VectorXd x_ddag;
  Eigen::Index rank1 = 0;
  double stage1_value = 0.0;  // 1/2 ||s1*||^2
  double stage2_value = 0.0;  // 1/2 ||s2*||^2
};

struct Stage1Result {
  Eigen::VectorXd s1;
  Eigen::VectorXd x_dag;
  Eigen::Index rank1 = 0;
};

struct Stage2Result {
  Eigen::VectorXd s2;
  Eigen::VectorXd x_ddag;
};

absl::StatusOr<Stage1Result> Stage1Shift(const ProblemData& p);

// Null-space method: with Z spanning null(A1), solves
// min_z ||(b2 - A2 x_dag) - A2 Z z|| for the min-norm z and sets
// x_ddag = x_dag + Z z.
absl::StatusOr<Stage2Result> Stage2Shift(const ProblemData& p,
                                         const Eigen::VectorXd& x_dag,
                                         Eigen::Index rank1);

absl::StatusOr<OracleResult> ComputeHierarchicalShift(const ProblemData& p);

}  // namespace hieralm

#endif  // HIERALM_HIERARCHY_ORACLE_H_
