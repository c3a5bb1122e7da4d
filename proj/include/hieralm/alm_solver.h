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

#ifndef HIERALM_ALM_SOLVER_H_
#define HIERALM_ALM_SOLVER_H_

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hieralm/hierarchy_oracle.h"
#include "hieralm/infeasibility_control.h"
#include "hieralm/problem_model.h"

namespace hieralm {

enum class SolverMode { kInfeasibilityControl, kStandardAL };

// Componentwise bounds [lo, hi] for the auxiliary multipliers. Length-1
// bounds are broadcast to the block size.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static Box Uniform(double lo, double hi);
  Eigen::VectorXd Lower(Eigen::Index size) const;
  Eigen::VectorXd Upper(Eigen::Index size) const;
};

// Subproblem tolerance eps^(k) = initial * factor^k. Subproblems are solved by
// direct factorization, so the achieved gradient norm is recorded and is
// normally far below this bound.
struct EpsSchedule {
  double initial = 1e-4;
  double factor = 0.1;

  double At(int k) const;
};

struct SolverConfig {
  double tau = 0.1;
  double gamma = 5.0;
  Box box1 = Box::Uniform(-1e6, 1e6);
  Box box2 = Box::Uniform(-1e6, 1e6);
  double rho0 = 1.0;
  double u0 = 1e3;
  SigmaSchedule sigma_schedule;
  EpsSchedule eps_schedule;
  double kkt_tol = 1e-6;
  int max_iter = 50;
  double rho_cap = 1e14;
  SolverMode mode = SolverMode::kInfeasibilityControl;
  // Keep full per-iteration vectors in the trace.
  bool record_state = false;
};

absl::Status ValidateConfig(const SolverConfig& config, const ProblemData& p);

// Iterate vectors after iteration k. `shift` is the shift used to compute x.
struct IterationState {
  Eigen::VectorXd x;
  Eigen::VectorXd s1;
  Eigen::VectorXd s2;
  Eigen::VectorXd lambda1;
  Eigen::VectorXd lambda2;
  Eigen::VectorXd lambda_hat1;
  Eigen::VectorXd lambda_hat2;
  HierarchicalShift shift;
};

// Row k describes the state after the k-th pass through the update steps:
// E, the residual norms and r1/r2 all refer to the shift that produced x^(k),
// and rho is the penalty after its update.
struct IterationRecord {
  int k = 0;
  double E = 0.0;
  double norm_s1 = 0.0;
  double norm_s2 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double rho = 0.0;
  double norm_lambda1 = 0.0;
  double norm_lambda2 = 0.0;
  double subproblem_grad_norm = 0.0;
  double eps = 0.0;
  double u = 0.0;
  std::optional<IterationState> state;
};

enum class SolveStatus { kConverged, kMaxIter, kDivergenceSuspected };

const char* SolveStatusName(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxIter;
  Eigen::VectorXd x_final;
  std::vector<IterationRecord> trace;
  HierarchicalShift shift_final;
  double objective_final = 0.0;
  // Exact hierarchically optimal shift the r1/r2 columns are measured
  // against.
  HierarchicalShift oracle_shift;
};

// f(x) + lh1^T r1 + lh2^T r2 + rho/2 (||r1||^2 + ||r2||^2), with (r1, r2) the
// shifted constraint residuals.
absl::StatusOr<double> AugmentedLagrangianValue(
    const ProblemData& p, const Eigen::VectorXd& x,
    const Eigen::VectorXd& lambda_hat1, const Eigen::VectorXd& lambda_hat2,
    double rho, const HierarchicalShift& shift);

struct SubproblemSolution {
  Eigen::VectorXd x;
  double grad_norm = 0.0;
};

// True for the status returned when the augmented Lagrangian is unbounded
// below (singular and inconsistent stationarity system).
bool IsSubproblemUnbounded(const absl::Status& status);

// Minimizes the augmented Lagrangian in x by solving
//   (Q + rho A1^T A1 + rho A2^T A2) x = -c - A1^T lh1 - A2^T lh2
//                                       + rho A1^T (b1 - s1) + rho A2^T (b2 - s2).
// The system matrix is singular exactly when [Q; A1; A2] is rank deficient,
// which does not depend on rho; in that case the min-norm solution is
// returned. Factorizations are cached per rho.
class SubproblemSolver {
 public:
  explicit SubproblemSolver(const ProblemData& p);

  absl::StatusOr<SubproblemSolution> Solve(const Eigen::VectorXd& lambda_hat1,
                                           const Eigen::VectorXd& lambda_hat2,
                                           double rho,
                                           const HierarchicalShift& shift,
                                           double eps);

  bool singular() const { return null_basis_.cols() > 0; }

 private:
  absl::Status Factorize(double rho);

  const ProblemData& p_;
  Eigen::MatrixXd gram_;  // A1^T A1 + A2^T A2
  // Orthonormal basis of null(Q) intersected with null(A); empty when the
  // system matrix is positive definite.
  Eigen::MatrixXd null_basis_;
  double factored_rho_ = -1.0;
  Eigen::MatrixXd system_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

absl::StatusOr<SubproblemSolution> SolveSubproblem(
    const ProblemData& p, const Eigen::VectorXd& lambda_hat1,
    const Eigen::VectorXd& lambda_hat2, double rho,
    const HierarchicalShift& shift, double eps);

// Componentwise clamp of v to [lo, hi].
Eigen::VectorXd ProjectBox(const Eigen::VectorXd& v, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi);

// rho if u_new <= tau * u_old, gamma * rho otherwise.
double UpdatePenalty(double u_new, double u_old, double rho, double tau,
                     double gamma);

// ||Q x + c + A1^T l1 + A2^T l2|| + ||A1 x - b1 + s1|| + ||A2 x - b2 + s2||.
absl::StatusOr<double> KktResidual(const ProblemData& p,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& lambda1,
                                   const Eigen::VectorXd& lambda2,
                                   const HierarchicalShift& shift);

// Augmented Lagrangian method with infeasibility control. In kStandardAL
// mode the shift is held at zero, which is the classical method.
absl::StatusOr<SolveReport> Run(const ProblemData& p,
                                const SolverConfig& config);

}  // namespace hieralm

#endif  // HIERALM_ALM_SOLVER_H_
