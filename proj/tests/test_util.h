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

#ifndef HIERALM_TESTS_TEST_UTIL_H_
#define HIERALM_TESTS_TEST_UTIL_H_

#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hieralm/alm_solver.h"
#include "hieralm/problem_model.h"

namespace hieralm::testing {

Eigen::VectorXd Vec(std::initializer_list<double> values);
// Rows of a dense matrix; `cols` is used when there are no rows.
Eigen::MatrixXd Mat(std::initializer_list<std::initializer_list<double>> rows,
                    Eigen::Index cols = 0);

ProblemData MakeProblem(Eigen::MatrixXd q, Eigen::VectorXd c,
                        Eigen::MatrixXd a1, Eigen::VectorXd b1,
                        Eigen::MatrixXd a2, Eigen::VectorXd b2);

// The one-variable instance min 1/2 x^2 s.t. x = 1 (high), x = 0 (low).
ProblemData OneVariableConflict();

// Shift of the weighted least-squares problem from the regularized normal
// equations (sigma1 A1^T A1 + sigma2 A2^T A2 + 1e-12 I) x = ...; weights are
// normalized so the larger one is 1.
HierarchicalShift NormalEquationsShift(const ProblemData& p, double sigma1,
                                       double sigma2);

struct KktSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Solves the equality-constrained QP min f(x) s.t. A x = b - s directly from
// its KKT system [Q A^T; A 0] [x; y] = [-c; b - s] (min-norm solution).
KktSolution SolveShiftedQpByKkt(const ProblemData& p,
                                const HierarchicalShift& shift);

// Result of enumerating x over the grid {-5, -4.95, ..., 5}^n.
struct BruteForceResult {
  double min_stage1 = 0.0;             // min over grid of ||b1 - A1 x||
  double min_stage2_near_opt = 0.0;    // min ||b2 - A2 x|| over near points
  long long near_points = 0;           // points within stage1_slack of s1*
};

BruteForceResult BruteForceLexicographic(const ProblemData& p,
                                         double stage1_target,
                                         double stage1_slack);

// Algorithm bookkeeping identities checked on a trace recorded with
// record_state = true. Returns human-readable violations (empty if none).
std::vector<std::string> CheckBookkeeping(const ProblemData& p,
                                          const SolverConfig& config,
                                          const SolveReport& report);

}  // namespace hieralm::testing

#endif  // HIERALM_TESTS_TEST_UTIL_H_
