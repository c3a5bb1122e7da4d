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

#include "hieralm/hierarchy_oracle.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "hieralm/linalg.h"

namespace hieralm {
namespace {

absl::Status CheckFinite(const ProblemData& p) {
  if (!p.a1.allFinite() || !p.b1.allFinite() || !p.a2.allFinite() ||
      !p.b2.allFinite()) {
    return absl::InvalidArgumentError("constraint data has non-finite entries");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Stage1Result> Stage1Shift(const ProblemData& p) {
  if (absl::Status s = CheckFinite(p); !s.ok()) return s;
  Stage1Result out;
  if (p.m1() == 0) {
    out.s1 = Eigen::VectorXd(0);
    out.x_dag = Eigen::VectorXd::Zero(p.n());
    return out;
  }
  LeastSquaresSolution ls = MinNormLeastSquares(p.a1, p.b1);
  out.x_dag = std::move(ls.x);
  out.rank1 = ls.rank;
  out.s1 = p.b1 - p.a1 * out.x_dag;
  return out;
}

absl::StatusOr<Stage2Result> Stage2Shift(const ProblemData& p,
                                         const Eigen::VectorXd& x_dag,
                                         Eigen::Index rank1) {
  if (absl::Status s = CheckFinite(p); !s.ok()) return s;
  if (x_dag.size() != p.n()) {
    return absl::InvalidArgumentError(
        absl::StrCat("x_dag has length ", x_dag.size(), ", expected ", p.n()));
  }
  Stage2Result out;
  if (p.m2() == 0) {
    out.s2 = Eigen::VectorXd(0);
    out.x_ddag = x_dag;
    return out;
  }
  const Eigen::VectorXd residual = p.b2 - p.a2 * x_dag;
  out.x_ddag = x_dag + NullSpaceLeastSquares(p.a1, rank1, p.a2, residual);
  out.s2 = p.b2 - p.a2 * out.x_ddag;
  return out;
}

absl::StatusOr<OracleResult> ComputeHierarchicalShift(const ProblemData& p) {
  absl::StatusOr<Stage1Result> stage1 = Stage1Shift(p);
  if (!stage1.ok()) return stage1.status();
  absl::StatusOr<Stage2Result> stage2 =
      Stage2Shift(p, stage1->x_dag, stage1->rank1);
  if (!stage2.ok()) return stage2.status();

  OracleResult out;
  out.shift.kind = ShiftKind::kOracleExact;
  out.shift.s1 = std::move(stage1->s1);
  out.shift.s2 = std::move(stage2->s2);
  out.x_dag = std::move(stage1->x_dag);
  out.x_ddag = std::move(stage2->x_ddag);
  out.rank1 = stage1->rank1;
  out.stage1_value = 0.5 * Norm(out.shift.s1) * Norm(out.shift.s1);
  out.stage2_value = 0.5 * Norm(out.shift.s2) * Norm(out.shift.s2);
  return out;
}

}  // namespace hieralm
