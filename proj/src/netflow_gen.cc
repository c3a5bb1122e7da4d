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

#include "hieralm/netflow_gen.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace hieralm {

absl::Status ValidateGridSpec(const GridSpec& spec) {
  if (spec.rows < 2 || spec.cols < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "grid needs rows >= 2 and cols >= 1, got ", spec.rows, "x", spec.cols));
  }
  if (!(spec.kappa >= 0) || !std::isfinite(spec.kappa)) {
    return absl::InvalidArgumentError("kappa must be finite and nonnegative");
  }
  if (!(spec.q_scale > 0) || !std::isfinite(spec.q_scale) ||
      !std::isfinite(spec.c_scale)) {
    return absl::InvalidArgumentError(
        "q_scale must be positive and c_scale finite");
  }
  return absl::OkStatus();
}

GridIncidence BuildGridIncidence(int rows, int cols) {
  GridIncidence g;
  g.node_index.assign(rows, std::vector<int>(cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) g.node_index[r][c] = r * cols + c;
  }
  const auto& id = g.node_index;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) g.edges.emplace_back(id[r][c], id[r][c + 1]);
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 1; c < cols; ++c) g.edges.emplace_back(id[r][c], id[r][c - 1]);
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) g.edges.emplace_back(id[r][c], id[r + 1][c]);
  }
  for (int r = 1; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) g.edges.emplace_back(id[r][c], id[r - 1][c]);
  }
  g.a = Eigen::MatrixXd::Zero(rows * cols, static_cast<Eigen::Index>(g.edges.size()));
  for (size_t j = 0; j < g.edges.size(); ++j) {
    const auto [tail, head] = g.edges[j];
    g.a(head, j) = 1.0;
    g.a(tail, j) = -1.0;
  }
  return g;
}

std::string GridPartition::ToJson() const {
  nlohmann::json j;
  j["grid"] = {{"rows", spec.rows},
               {"cols", spec.cols},
               {"kappa", spec.kappa},
               {"q_scale", spec.q_scale},
               {"c_scale", spec.c_scale}};
  j["high_priority_nodes"] = high_priority_nodes;
  j["low_priority_nodes"] = low_priority_nodes;
  return j.dump();
}

absl::StatusOr<GridInstance> BuildGridInstance(const GridSpec& spec) {
  if (absl::Status s = ValidateGridSpec(spec); !s.ok()) return s;
  const GridIncidence g = BuildGridIncidence(spec.rows, spec.cols);
  const int m = spec.rows * spec.cols;
  const Eigen::Index n = g.a.cols();

  // Top row supplies (-1), bottom row demands (+1).
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (int c = 0; c < spec.cols; ++c) {
    b[g.node_index[0][c]] = -1.0;
    b[g.node_index[spec.rows - 1][c]] = 1.0;
  }

  GridInstance out;
  out.partition.spec = spec;
  for (int node = 0; node < m; ++node) {
    const bool supply = node < spec.cols;
    (supply ? out.partition.low_priority_nodes
            : out.partition.high_priority_nodes)
        .push_back(node);
  }
  const auto& hi = out.partition.high_priority_nodes;
  const auto& lo = out.partition.low_priority_nodes;

  ProblemData& p = out.problem;
  p.q = spec.q_scale * Eigen::MatrixXd::Identity(n, n);
  p.c = Eigen::VectorXd::Constant(n, spec.c_scale);
  p.a1.resize(static_cast<Eigen::Index>(hi.size()), n);
  p.b1.resize(static_cast<Eigen::Index>(hi.size()));
  for (size_t i = 0; i < hi.size(); ++i) {
    p.a1.row(i) = g.a.row(hi[i]);
    p.b1[i] = b[hi[i]];
  }
  p.a2.resize(static_cast<Eigen::Index>(lo.size()), n);
  p.b2.resize(static_cast<Eigen::Index>(lo.size()));
  for (size_t i = 0; i < lo.size(); ++i) {
    p.a2.row(i) = g.a.row(lo[i]);
    p.b2[i] = b[lo[i]] + spec.kappa;
  }
  return out;
}

}  // namespace hieralm
