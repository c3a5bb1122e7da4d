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

#include <set>

#include "gtest/gtest.h"
#include "hieralm/hierarchy_oracle.h"

namespace hieralm {
namespace {

TEST(GridIncidenceTest, Sizes) {
  GridIncidence g = BuildGridIncidence(20, 20);
  EXPECT_EQ(g.a.rows(), 400);
  EXPECT_EQ(g.a.cols(), 1520);
  g = BuildGridIncidence(2, 2);
  EXPECT_EQ(g.a.rows(), 4);
  EXPECT_EQ(g.a.cols(), 8);
  g = BuildGridIncidence(3, 5);
  EXPECT_EQ(g.a.cols(), 2 * (3 * 4 + 2 * 5));
}

TEST(GridIncidenceTest, ColumnStructure) {
  for (auto [r, c] : {std::pair{2, 2}, std::pair{4, 3}, std::pair{20, 20}}) {
    const GridIncidence g = BuildGridIncidence(r, c);
    ASSERT_EQ(g.edges.size(), static_cast<size_t>(g.a.cols()));
    for (Eigen::Index j = 0; j < g.a.cols(); ++j) {
      int plus = 0, minus = 0, other = 0;
      for (Eigen::Index i = 0; i < g.a.rows(); ++i) {
        const double v = g.a(i, j);
        if (v == 1.0) {
          ++plus;
          EXPECT_EQ(i, g.edges[j].second);
        } else if (v == -1.0) {
          ++minus;
          EXPECT_EQ(i, g.edges[j].first);
        } else if (v != 0.0) {
          ++other;
        }
      }
      EXPECT_EQ(plus, 1);
      EXPECT_EQ(minus, 1);
      EXPECT_EQ(other, 0);
    }
    // e^T A = 0.
    EXPECT_EQ(g.a.colwise().sum().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(GridIncidenceTest, EdgesJoinNeighboursInBothDirections) {
  const GridIncidence g = BuildGridIncidence(3, 4);
  std::set<std::pair<int, int>> seen(g.edges.begin(), g.edges.end());
  EXPECT_EQ(seen.size(), g.edges.size());
  for (auto [u, v] : g.edges) {
    const int ur = u / 4, uc = u % 4, vr = v / 4, vc = v % 4;
    EXPECT_EQ(std::abs(ur - vr) + std::abs(uc - vc), 1);
    EXPECT_TRUE(seen.count({v, u}));
  }
  // First edge is rightward from node (0, 0).
  EXPECT_EQ(g.edges[0], std::make_pair(0, 1));
  EXPECT_EQ(g.node_index[1][2], 6);
}

TEST(BuildGridInstanceTest, PartitionAndData) {
  GridSpec spec;
  auto inst = BuildGridInstance(spec);
  ASSERT_TRUE(inst.ok());
  const ProblemData& p = inst->problem;
  EXPECT_EQ(p.m1(), 380);
  EXPECT_EQ(p.m2(), 20);
  EXPECT_EQ(p.n(), 1520);
  EXPECT_EQ(inst->partition.low_priority_nodes.size(), 20u);
  EXPECT_EQ(p.b2.sum(), -20.0);
  EXPECT_EQ(p.b1.sum(), 20.0);
  EXPECT_EQ(p.b1.tail(20).minCoeff(), 1.0);
  EXPECT_EQ(p.b1.head(360).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((p.q - Eigen::MatrixXd::Identity(1520, 1520)).norm(), 0.0);
  EXPECT_EQ((p.c.array() - 0.1).abs().maxCoeff(), 0.0);

  spec.kappa = 0.5;
  inst = BuildGridInstance(spec);
  ASSERT_TRUE(inst.ok());
  EXPECT_EQ(inst->problem.b2.sum(), -10.0);
  // e^T A = 0 while e^T b != 0, so A x = b has no solution.
  EXPECT_NE(inst->problem.b1.sum() + inst->problem.b2.sum(), 0.0);
}

TEST(BuildGridInstanceTest, InvalidSpecs) {
  GridSpec spec;
  spec.rows = 1;
  EXPECT_FALSE(BuildGridInstance(spec).ok());
  spec = GridSpec();
  spec.kappa = -1;
  EXPECT_FALSE(BuildGridInstance(spec).ok());
  spec = GridSpec();
  spec.q_scale = 0;
  EXPECT_FALSE(BuildGridInstance(spec).ok());
  spec = GridSpec();
  spec.cols = 0;
  EXPECT_FALSE(BuildGridInstance(spec).ok());
}

TEST(BuildGridInstanceTest, FeasibilityDichotomy) {
  for (auto [r, c] : {std::pair{2, 2}, std::pair{5, 4}, std::pair{20, 20}}) {
    GridSpec spec;
    spec.rows = r;
    spec.cols = c;
    auto inst = BuildGridInstance(spec);
    ASSERT_TRUE(inst.ok());
    auto oracle = ComputeHierarchicalShift(inst->problem);
    ASSERT_TRUE(oracle.ok());
    EXPECT_LT(oracle->shift.s1.norm() + oracle->shift.s2.norm(), 1e-8);

    spec.kappa = 0.5;
    inst = BuildGridInstance(spec);
    ASSERT_TRUE(inst.ok());
    oracle = ComputeHierarchicalShift(inst->problem);
    ASSERT_TRUE(oracle.ok());
    EXPECT_LT(oracle->shift.s1.norm(), 1e-8);
    EXPECT_GT(oracle->shift.s2.norm(), 0.0);
    // The surplus c * kappa is spread evenly over the supply rows.
    EXPECT_NEAR(oracle->shift.s2.sum(), 0.5 * c, 1e-8);
  }
}

TEST(GridPartitionTest, JsonNamesPartition) {
  GridSpec spec;
  spec.rows = 2;
  spec.cols = 3;
  auto inst = BuildGridInstance(spec);
  ASSERT_TRUE(inst.ok());
  const std::string json = inst->partition.ToJson();
  EXPECT_NE(json.find("low_priority_nodes"), std::string::npos) << json;
  EXPECT_NE(json.find("kappa"), std::string::npos) << json;
}

}  // namespace
}  // namespace hieralm
