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

#include "hieralm/alm_solver.h"

#include <cmath>
#include <random>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "hieralm/hierarchy_oracle.h"
#include "hieralm/random_instance.h"
#include "test_util.h"

namespace hieralm {
namespace {

using ::hieralm::testing::CheckBookkeeping;
using ::hieralm::testing::MakeProblem;
using ::hieralm::testing::Mat;
using ::hieralm::testing::OneVariableConflict;
using ::hieralm::testing::SolveShiftedQpByKkt;
using ::hieralm::testing::Vec;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

ProblemData SingleEquality() {
  return MakeProblem(Mat({{1}}), Vec({0}), Mat({{1}}), Vec({1}), Mat({}, 1),
                     Vec({}));
}

TEST(AugmentedLagrangianValueTest, Examples) {
  const ProblemData p = SingleEquality();
  const HierarchicalShift zero = HierarchicalShift::Zero(p);
  EXPECT_NEAR(*AugmentedLagrangianValue(p, Vec({0}), Vec({0}), Vec({}), 1.0,
                                        zero),
              0.5, 1e-15);
  EXPECT_NEAR(*AugmentedLagrangianValue(p, Vec({0.5}), Vec({0}), Vec({}), 1.0,
                                        zero),
              0.25, 1e-15);
  // Zero residual reduces to f.
  EXPECT_NEAR(*AugmentedLagrangianValue(p, Vec({1}), Vec({3}), Vec({}), 7.0,
                                        zero),
              0.5, 1e-15);
  EXPECT_FALSE(
      AugmentedLagrangianValue(p, Vec({1, 2}), Vec({0}), Vec({}), 1.0, zero)
          .ok());
}

TEST(SolveSubproblemTest, Examples) {
  const ProblemData p = SingleEquality();
  const HierarchicalShift zero = HierarchicalShift::Zero(p);
  auto r = SolveSubproblem(p, Vec({0}), Vec({}), 1.0, zero, 1e-8);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(r->x[0], 0.5, 1e-15);
  EXPECT_LE(r->grad_norm, 1e-12);

  r = SolveSubproblem(p, Vec({0}), Vec({}), 625.0, zero, 1e-8);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->x[0], 625.0 / 626.0, 1e-15);
}

TEST(SolveSubproblemTest, UnboundedLinearObjective) {
  const ProblemData p = MakeProblem(Mat({{0}}), Vec({1}), Mat({}, 1), Vec({}),
                                    Mat({}, 1), Vec({}));
  auto r = SolveSubproblem(p, Vec({}), Vec({}), 1.0,
                           HierarchicalShift::Zero(p), 1e-8);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(IsSubproblemUnbounded(r.status()));
  EXPECT_FALSE(IsSubproblemUnbounded(absl::InternalError("x")));
}

TEST(SolveSubproblemTest, SingularConsistentGivesMinNorm) {
  // Q = 0 on x2, which is also free of constraints, and c2 = 0.
  const ProblemData p = MakeProblem(Mat({{1, 0}, {0, 0}}), Vec({0, 0}),
                                    Mat({{1, 0}}), Vec({1}), Mat({}, 2),
                                    Vec({}));
  auto r = SolveSubproblem(p, Vec({0}), Vec({}), 1.0,
                           HierarchicalShift::Zero(p), 1e-8);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(r->x[0], 0.5, 1e-15);
  EXPECT_EQ(r->x[1], 0.0);
}

// Stationarity of the augmented Lagrangian, checked by finite differences of
// AugmentedLagrangianValue (an independent evaluation path).
TEST(SolveSubproblemTest, IsStationaryPoint) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RandomInstanceOptions opts;
    opts.n = 2 + trial % 4;
    const ProblemData p = RandomInstance(opts, rng);
    HierarchicalShift shift = HierarchicalShift::Zero(p);
    Eigen::VectorXd l1(p.m1()), l2(p.m2());
    for (Eigen::Index i = 0; i < p.m1(); ++i) {
      l1[i] = u(rng);
      shift.s1[i] = u(rng);
    }
    for (Eigen::Index i = 0; i < p.m2(); ++i) {
      l2[i] = u(rng);
      shift.s2[i] = u(rng);
    }
    const double rho = 3.0;
    auto r = SolveSubproblem(p, l1, l2, rho, shift, 1e-8);
    ASSERT_TRUE(r.ok());
    for (Eigen::Index j = 0; j < p.n(); ++j) {
      const double h = 1e-5;
      Eigen::VectorXd xp = r->x, xm = r->x;
      xp[j] += h;
      xm[j] -= h;
      const double d = (*AugmentedLagrangianValue(p, xp, l1, l2, rho, shift) -
                        *AugmentedLagrangianValue(p, xm, l1, l2, rho, shift)) /
                       (2 * h);
      EXPECT_NEAR(d, 0.0, 1e-6);
    }
  }
}

TEST(ProjectBoxTest, Examples) {
  EXPECT_EQ(ProjectBox(Vec({0.3}), Vec({-1}), Vec({1}))[0], 0.3);
  EXPECT_EQ(ProjectBox(Vec({5e6}), Vec({-1e6}), Vec({1e6}))[0], 1e6);
  const Eigen::VectorXd v =
      ProjectBox(Vec({-2, 0.5}), Vec({-1, -1}), Vec({1, 1}));
  EXPECT_EQ(v[0], -1.0);
  EXPECT_EQ(v[1], 0.5);
}

TEST(UpdatePenaltyTest, Examples) {
  EXPECT_EQ(UpdatePenalty(0.05, 1, 1, 0.1, 5), 1.0);
  EXPECT_EQ(UpdatePenalty(0.1, 1, 1, 0.1, 5), 1.0);
  EXPECT_EQ(UpdatePenalty(0.5, 1, 1, 0.1, 5), 5.0);
}

TEST(KktResidualTest, Examples) {
  const ProblemData p = SingleEquality();
  const HierarchicalShift zero = HierarchicalShift::Zero(p);
  EXPECT_NEAR(*KktResidual(p, Vec({0.5}), Vec({-0.5}), Vec({}), zero), 0.5,
              1e-15);
  // x = 1, lambda = -1 is the KKT point.
  EXPECT_NEAR(*KktResidual(p, Vec({1}), Vec({-1}), Vec({}), zero), 0.0, 1e-15);
  EXPECT_FALSE(KktResidual(p, Vec({1}), Vec({}), Vec({}), zero).ok());
}

TEST(ValidateConfigTest, RejectsBadValues) {
  const ProblemData p = OneVariableConflict();
  SolverConfig c;
  EXPECT_TRUE(ValidateConfig(c, p).ok());
  c.tau = 1.0;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.gamma = 1.0;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.box1 = Box::Uniform(1, -1);
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.kkt_tol = 0;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.rho0 = -1;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.u0 = 0;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
  c = SolverConfig();
  c.max_iter = 0;
  EXPECT_FALSE(ValidateConfig(c, p).ok());
}

TEST(RunTest, OneVariableConflictReachesHierarchicalSolution) {
  const ProblemData p = OneVariableConflict();
  SolverConfig config;
  config.record_state = true;
  auto r = hieralm::Run(p, config);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->status, SolveStatus::kConverged);
  EXPECT_NEAR(r->x_final[0], 1.0, 1e-5);
  EXPECT_NEAR(r->shift_final.s2[0], -1.0, 1e-5);
  EXPECT_THAT(CheckBookkeeping(p, config, *r), IsEmpty());
  EXPECT_LE(r->trace.back().E, config.kkt_tol);
}

TEST(RunTest, StandardModeOnConflictHitsRhoCap) {
  const ProblemData p = OneVariableConflict();
  SolverConfig config;
  config.mode = SolverMode::kStandardAL;
  config.record_state = true;
  config.rho_cap = 1e6;
  auto r = hieralm::Run(p, config);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->status, SolveStatus::kDivergenceSuspected);
  EXPECT_GT(r->trace.back().rho, 1e6);
  EXPECT_THAT(CheckBookkeeping(p, config, *r), IsEmpty());
}

TEST(RunTest, MaxIterStatus) {
  const ProblemData p = OneVariableConflict();
  SolverConfig config;
  config.max_iter = 2;
  auto r = hieralm::Run(p, config);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->status, SolveStatus::kMaxIter);
  EXPECT_EQ(r->trace.size(), 2u);
}

TEST(RunTest, UnconstrainedConvergesInOneIteration) {
  const ProblemData p = MakeProblem(Mat({{2, 0}, {0, 1}}), Vec({1, -1}),
                                    Mat({}, 2), Vec({}), Mat({}, 2), Vec({}));
  for (SolverMode mode :
       {SolverMode::kInfeasibilityControl, SolverMode::kStandardAL}) {
    SolverConfig config;
    config.mode = mode;
    auto r = hieralm::Run(p, config);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_EQ(r->status, SolveStatus::kConverged);
    EXPECT_EQ(r->trace.size(), 1u);
    EXPECT_NEAR(r->x_final[0], -0.5, 1e-14);
    EXPECT_NEAR(r->x_final[1], 1.0, 1e-14);
  }
}

TEST(RunTest, UnboundedSubproblemReportsIteration) {
  const ProblemData p = MakeProblem(Mat({{0}}), Vec({1}), Mat({}, 1), Vec({}),
                                    Mat({}, 1), Vec({}));
  auto r = hieralm::Run(p, SolverConfig());
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(IsSubproblemUnbounded(r.status()));
  EXPECT_THAT(std::string(r.status().message()), HasSubstr("iteration 1"));
}

TEST(RunTest, InvalidProblemRejected) {
  const ProblemData p = MakeProblem(Mat({{1, 0}, {0, -1}}), Vec({0, 0}),
                                    Mat({}, 2), Vec({}), Mat({}, 2), Vec({}));
  EXPECT_FALSE(hieralm::Run(p, SolverConfig()).ok());
}

TEST(RunTest, FeasibleInstancesModesCoincide) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    RandomInstanceOptions opts;
    opts.n = 3 + trial % 4;
    opts.m1 = 1 + trial % 2;
    opts.m2 = 1 + trial % 2;
    opts.feasible = true;
    const ProblemData p = RandomInstance(opts, rng);
    SolverConfig config;
    config.record_state = true;
    auto ic = hieralm::Run(p, config);
    config.mode = SolverMode::kStandardAL;
    auto al = hieralm::Run(p, config);
    ASSERT_TRUE(ic.ok() && al.ok());
    ASSERT_EQ(ic->trace.size(), al->trace.size());
    for (size_t i = 0; i < ic->trace.size(); ++i) {
      const IterationRecord& a = ic->trace[i];
      const IterationRecord& b = al->trace[i];
      EXPECT_NEAR(a.E, b.E, 1e-8);
      EXPECT_NEAR(a.rho, b.rho, 1e-8);
      EXPECT_NEAR(a.norm_lambda1, b.norm_lambda1, 1e-8);
      EXPECT_NEAR(a.norm_lambda2, b.norm_lambda2, 1e-8);
      EXPECT_NEAR(a.norm_s1, b.norm_s1, 1e-8);
      EXPECT_NEAR(a.norm_s2, b.norm_s2, 1e-8);
    }
    EXPECT_THAT(CheckBookkeeping(p, config, *al), IsEmpty());
  }
}

// The limit point solves the shifted QP at the oracle shift, which is checked
// against a direct KKT solve.
TEST(RunTest, ConvergesToShiftedQpSolution) {
  std::mt19937_64 rng(37);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    RandomInstanceOptions opts;
    opts.n = 4 + trial % 3;
    opts.m1 = 1 + trial % 3;
    opts.m2 = 1 + (trial / 3) % 3;
    const ProblemData p = RandomInstance(opts, rng);
    SolverConfig config;
    config.record_state = true;
    auto r = hieralm::Run(p, config);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_THAT(CheckBookkeeping(p, config, *r), IsEmpty());
    if (r->status != SolveStatus::kConverged) continue;
    ++checked;
    auto oracle = ComputeHierarchicalShift(p);
    ASSERT_TRUE(oracle.ok());
    const auto kkt = SolveShiftedQpByKkt(p, oracle->shift);
    const double feas =
        (p.a1 * r->x_final - p.b1 + oracle->shift.s1).norm() +
        (p.a2 * r->x_final - p.b2 + oracle->shift.s2).norm();
    EXPECT_LE(feas, 10 * config.kkt_tol) << trial;
    EXPECT_LE(r->objective_final,
              kkt.objective + 10 * config.kkt_tol * (1 + std::abs(kkt.objective)))
        << trial;
  }
  EXPECT_GE(checked, 25);
}

}  // namespace
}  // namespace hieralm
