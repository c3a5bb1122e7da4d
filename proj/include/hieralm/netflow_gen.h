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

#ifndef HIERALM_NETFLOW_GEN_H_
#define HIERALM_NETFLOW_GEN_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "hieralm/problem_model.h"

namespace hieralm {

// Grid flow network: every node is joined to its up/down/left/right
// neighbours by a pair of opposite directed edges. The top row supplies one
// unit per node and the bottom row demands one unit per node. Supply rows form
// the low-priority block, with b2 raised by kappa; all other rows are high
// priority.
struct GridSpec {
  int rows = 20;
  int cols = 20;
  double kappa = 0.0;
  double q_scale = 1.0;  // Q = q_scale * I
  double c_scale = 0.1;  // c = c_scale * e
};

absl::Status ValidateGridSpec(const GridSpec& spec);

struct GridIncidence {
  // Node-edge incidence: column of edge u->v has +1 at v and -1 at u.
  Eigen::MatrixXd a;
  // node_index[r][c] is the matrix row of node (r, c) (row-major).
  std::vector<std::vector<int>> node_index;
  // Tail and head node of each edge, in column order.
  std::vector<std::pair<int, int>> edges;
};

// Edges are ordered rightward, leftward, downward, upward, each block in
// row-major order of the tail node.
GridIncidence BuildGridIncidence(int rows, int cols);

struct GridPartition {
  // Node rows of the full incidence matrix placed in the A1 / A2 blocks, in
  // block order.
  std::vector<int> high_priority_nodes;
  std::vector<int> low_priority_nodes;
  GridSpec spec;

  // JSON object describing the grid and the partition.
  std::string ToJson() const;
};

struct GridInstance {
  ProblemData problem;
  GridPartition partition;
};

absl::StatusOr<GridInstance> BuildGridInstance(const GridSpec& spec);

}  // namespace hieralm

#endif  // HIERALM_NETFLOW_GEN_H_
