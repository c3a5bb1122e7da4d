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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/QR>
#include <Eigen/SparseCore>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "hieralm/linalg.h"
#include "logging.h"

namespace hieralm {
namespace {

constexpr char kUnboundedPrefix[] = "SubproblemUnbounded";
constexpr double kSubproblemRelTol = 1e-10;

// a x - b + s, or an empty vector for an empty block.
Eigen::VectorXd ShiftedResidual(const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b,
                                const Eigen::VectorXd& s,
                                const Eigen::VectorXd& x) {
  if (b.size() == 0) return Eigen::VectorXd(0);
  return a * x - b + s;
}

// a^T v, or zeros(n) for an empty block.
Eigen::VectorXd TransposeTimes(const Eigen::MatrixXd& a,
                               const Eigen::VectorXd& v, Eigen::Index n) {
  if (v.size() == 0) return Eigen::VectorXd::Zero(n);
  return a.transpose() * v;
}

absl::Status CheckLengths(const ProblemData& p, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& l1, const Eigen::VectorXd& l2,
                          const HierarchicalShift& shift) {
  if (x.size() != p.n() || l1.size() != p.m1() || l2.size() != p.m2()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: x, lambda1, lambda2 have lengths ", x.size(), ", ",
        l1.size(), ", ", l2.size(), "; expected ", p.n(), ", ", p.m1(), ", ",
        p.m2()));
  }
  return shift.CheckCompatible(p);
}

bool CholeskyWellConditioned(const Eigen::LLT<Eigen::MatrixXd>& llt,
                             Eigen::Index n) {
  if (llt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = llt.matrixLLT().diagonal().cwiseAbs2();
  return d.minCoeff() > RankThreshold(n, n) * d.maxCoeff();
}

absl::Status CheckBox(const Box& box, Eigen::Index m, const char* name) {
  if (m == 0) return absl::OkStatus();
  const auto size_ok = [m](Eigen::Index s) { return s == 1 || s == m; };
  if (!size_ok(box.lo.size()) || !size_ok(box.hi.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " bounds must have length 1 or ", m));
  }
  if ((box.Lower(m).array() > box.Upper(m).array()).any()) {
    return absl::InvalidArgumentError(absl::StrCat(name, " has lo > hi"));
  }
  return absl::OkStatus();
}

}  // namespace

Box Box::Uniform(double lo, double hi) {
  return Box{Eigen::VectorXd::Constant(1, lo), Eigen::VectorXd::Constant(1, hi)};
}

Eigen::VectorXd Box::Lower(Eigen::Index size) const {
  return lo.size() == 1 ? Eigen::VectorXd::Constant(size, lo[0]) : lo;
}

Eigen::VectorXd Box::Upper(Eigen::Index size) const {
  return hi.size() == 1 ? Eigen::VectorXd::Constant(size, hi[0]) : hi;
}

double EpsSchedule::At(int k) const { return initial * std::pow(factor, k); }

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "Converged";
    case SolveStatus::kMaxIter:
      return "MaxIter";
    case SolveStatus::kDivergenceSuspected:
      return "DivergenceSuspected";
  }
  return "Unknown";
}

absl::Status ValidateConfig(const SolverConfig& config, const ProblemData& p) {
  if (!(config.tau > 0 && config.tau < 1)) {
    return absl::InvalidArgumentError("tau must lie in (0, 1)");
  }
  if (!(config.gamma > 1)) {
    return absl::InvalidArgumentError("gamma must exceed 1");
  }
  if (!(config.rho0 > 0) || !(config.u0 > 0)) {
    return absl::InvalidArgumentError("rho0 and u0 must be positive");
  }
  if (!(config.kkt_tol > 0)) {
    return absl::InvalidArgumentError("kkt_tol must be positive");
  }
  if (config.max_iter < 1) {
    return absl::InvalidArgumentError("max_iter must be at least 1");
  }
  if (!(config.rho_cap > 0)) {
    return absl::InvalidArgumentError("rho_cap must be positive");
  }
  if (!(config.eps_schedule.initial > 0) ||
      !(config.eps_schedule.factor > 0 && config.eps_schedule.factor <= 1)) {
    return absl::InvalidArgumentError(
        "eps schedule needs initial > 0 and factor in (0, 1]");
  }
  if (absl::Status s = CheckBox(config.box1, p.m1(), "box1"); !s.ok()) return s;
  return CheckBox(config.box2, p.m2(), "box2");
}

absl::StatusOr<double> AugmentedLagrangianValue(
    const ProblemData& p, const Eigen::VectorXd& x,
    const Eigen::VectorXd& lambda_hat1, const Eigen::VectorXd& lambda_hat2,
    double rho, const HierarchicalShift& shift) {
  if (absl::Status s = CheckLengths(p, x, lambda_hat1, lambda_hat2, shift);
      !s.ok()) {
    return s;
  }
  if (!(rho > 0)) return absl::InvalidArgumentError("rho must be positive");
  const Eigen::VectorXd r1 = ShiftedResidual(p.a1, p.b1, shift.s1, x);
  const Eigen::VectorXd r2 = ShiftedResidual(p.a2, p.b2, shift.s2, x);
  const double f = 0.5 * x.dot(p.q * x) + p.c.dot(x);
  return f + lambda_hat1.dot(r1) + lambda_hat2.dot(r2) +
         0.5 * rho * (r1.squaredNorm() + r2.squaredNorm());
}

bool IsSubproblemUnbounded(const absl::Status& status) {
  return status.code() == absl::StatusCode::kFailedPrecondition &&
         absl::StartsWith(status.message(), kUnboundedPrefix);
}

SubproblemSolver::SubproblemSolver(const ProblemData& p) : p_(p) {
  const Eigen::Index n = p.n();
  // Constraint matrices are typically sparse (incidence matrices).
  const Eigen::SparseMatrix<double> a = p.StackedA().sparseView();
  gram_ = Eigen::MatrixXd(a.transpose() * a);

  // Q + rho A^T A is singular iff null(Q) and null(A) intersect, for every
  // rho > 0. A well-conditioned Cholesky factor of Q settles it cheaply.
  Eigen::LLT<Eigen::MatrixXd> q_llt(p.q);
  if (CholeskyWellConditioned(q_llt, n)) return;
  Eigen::MatrixXd stacked(n + p.m(), n);
  stacked.topRows(n) = p.q;
  if (p.m() > 0) stacked.bottomRows(p.m()) = p.StackedA();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(RankThreshold(stacked.rows(), n));
  cod.compute(stacked);
  if (cod.rank() < n) null_basis_ = NullSpaceBasis(stacked, cod.rank());
}

absl::Status SubproblemSolver::Factorize(double rho) {
  if (rho == factored_rho_) return absl::OkStatus();
  system_ = p_.q + rho * gram_;
  // Adding N N^T makes the matrix definite without changing the solution on
  // the orthogonal complement of null(H); the result is the min-norm solution.
  if (singular()) {
    system_.noalias() += null_basis_ * null_basis_.transpose();
  }
  llt_.compute(system_);
  if (llt_.info() != Eigen::Success) {
    factored_rho_ = -1.0;
    return absl::InternalError(
        absl::StrCat("Cholesky factorization failed at rho = ", rho));
  }
  factored_rho_ = rho;
  return absl::OkStatus();
}

absl::StatusOr<SubproblemSolution> SubproblemSolver::Solve(
    const Eigen::VectorXd& lambda_hat1, const Eigen::VectorXd& lambda_hat2,
    double rho, const HierarchicalShift& shift, double eps) {
  const Eigen::Index n = p_.n();
  if (absl::Status s = CheckLengths(p_, Eigen::VectorXd::Zero(n), lambda_hat1,
                                    lambda_hat2, shift);
      !s.ok()) {
    return s;
  }
  if (!(rho > 0)) return absl::InvalidArgumentError("rho must be positive");
  if (!(eps >= 0)) return absl::InvalidArgumentError("eps must be nonnegative");

  Eigen::VectorXd rhs = -p_.c;
  if (p_.m1() > 0) {
    rhs += p_.a1.transpose() * (rho * (p_.b1 - shift.s1) - lambda_hat1);
  }
  if (p_.m2() > 0) {
    rhs += p_.a2.transpose() * (rho * (p_.b2 - shift.s2) - lambda_hat2);
  }
  const double tol = std::max(eps, kSubproblemRelTol * (1.0 + Norm(rhs)));

  Eigen::VectorXd x;
  if (absl::Status s = Factorize(rho); s.ok()) {
    x = llt_.solve(rhs);
  } else {
    Log().warn("{}; falling back to an orthogonal decomposition",
               std::string(s.message()));
    Eigen::MatrixXd h = p_.q + rho * gram_;
    x = MinNormLeastSquares(h, rhs).x;
  }
  const auto gradient = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return p_.q * v + rho * (gram_ * v) - rhs;
  };
  Eigen::VectorXd grad = gradient(x);
  if (grad.norm() > tol && factored_rho_ == rho) {
    x -= llt_.solve(grad);
    grad = gradient(x);
  }
  SubproblemSolution out{std::move(x), grad.norm()};
  if (out.grad_norm > tol) {
    if (singular()) {
      return absl::FailedPreconditionError(absl::StrCat(
          kUnboundedPrefix, ": stationarity system is singular and "
          "inconsistent (residual ", out.grad_norm, "); the augmented "
          "Lagrangian is unbounded below at this shift"));
    }
    return absl::InternalError(absl::StrCat(
        "subproblem residual ", out.grad_norm, " exceeds tolerance ", tol));
  }
  return out;
}

absl::StatusOr<SubproblemSolution> SolveSubproblem(
    const ProblemData& p, const Eigen::VectorXd& lambda_hat1,
    const Eigen::VectorXd& lambda_hat2, double rho,
    const HierarchicalShift& shift, double eps) {
  SubproblemSolver solver(p);
  return solver.Solve(lambda_hat1, lambda_hat2, rho, shift, eps);
}

Eigen::VectorXd ProjectBox(const Eigen::VectorXd& v, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi) {
  return v.cwiseMax(lo).cwiseMin(hi);
}

double UpdatePenalty(double u_new, double u_old, double rho, double tau,
                     double gamma) {
  return u_new <= tau * u_old ? rho : gamma * rho;
}

absl::StatusOr<double> KktResidual(const ProblemData& p,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& lambda1,
                                   const Eigen::VectorXd& lambda2,
                                   const HierarchicalShift& shift) {
  if (absl::Status s = CheckLengths(p, x, lambda1, lambda2, shift); !s.ok()) {
    return s;
  }
  const Eigen::Index n = p.n();
  const Eigen::VectorXd stationarity = p.q * x + p.c +
                                       TransposeTimes(p.a1, lambda1, n) +
                                       TransposeTimes(p.a2, lambda2, n);
  return stationarity.norm() +
         Norm(ShiftedResidual(p.a1, p.b1, shift.s1, x)) +
         Norm(ShiftedResidual(p.a2, p.b2, shift.s2, x));
}

absl::StatusOr<SolveReport> Run(const ProblemData& p,
                                const SolverConfig& config) {
  if (const ValidationReport v = ValidateProblem(p); !v.ok) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid problem: ", v.ToString()));
  }
  if (absl::Status s = ValidateConfig(config, p); !s.ok()) return s;
  absl::StatusOr<OracleResult> oracle = ComputeHierarchicalShift(p);
  if (!oracle.ok()) return oracle.status();

  const Eigen::Index m1 = p.m1();
  const Eigen::Index m2 = p.m2();
  const Eigen::VectorXd lo1 = config.box1.Lower(m1);
  const Eigen::VectorXd hi1 = config.box1.Upper(m1);
  const Eigen::VectorXd lo2 = config.box2.Lower(m2);
  const Eigen::VectorXd hi2 = config.box2.Upper(m2);

  SubproblemSolver subproblem(p);
  Eigen::VectorXd lambda_hat1 = Eigen::VectorXd::Zero(m1);
  Eigen::VectorXd lambda_hat2 = Eigen::VectorXd::Zero(m2);
  double u = config.u0;
  double rho = config.rho0;
  bool warned_cap = false;

  SolveReport report;
  report.oracle_shift = oracle->shift;
  report.x_final = Eigen::VectorXd::Zero(p.n());
  report.shift_final = HierarchicalShift::Zero(p);

  for (int k = 0; k < config.max_iter; ++k) {
    // Step 1: shift.
    HierarchicalShift shift = HierarchicalShift::Zero(p);
    if (config.mode == SolverMode::kInfeasibilityControl) {
      const SigmaPair sigma = config.sigma_schedule.At(k);
      if (sigma.eta_capped && !warned_cap) {
        Log().warn("sigma1/sigma2 saturated at eta_cap = {:g} from k = {}",
                   config.sigma_schedule.eta_cap(), k);
        warned_cap = true;
      }
      absl::StatusOr<RsigmaSolution> rs = SolveRsigma(p, sigma);
      if (!rs.ok()) return rs.status();
      shift = std::move(rs->shift);
    }

    // Step 2: minimize the augmented Lagrangian.
    const double eps = config.eps_schedule.At(k);
    absl::StatusOr<SubproblemSolution> sub =
        subproblem.Solve(lambda_hat1, lambda_hat2, rho, shift, eps);
    if (!sub.ok()) {
      return absl::Status(sub.status().code(),
                          absl::StrCat(sub.status().message(),
                                       " (iteration ", k + 1, ")"));
    }
    Eigen::VectorXd& x = sub->x;

    // Step 3: multiplier and penalty updates.
    Eigen::VectorXd s1 = ShiftedResidual(p.a1, p.b1, shift.s1, x);
    Eigen::VectorXd s2 = ShiftedResidual(p.a2, p.b2, shift.s2, x);
    Eigen::VectorXd lambda1 = lambda_hat1 + rho * s1;
    Eigen::VectorXd lambda2 = lambda_hat2 + rho * s2;
    Eigen::VectorXd next_hat1 = ProjectBox(lambda1, lo1, hi1);
    Eigen::VectorXd next_hat2 = ProjectBox(lambda2, lo2, hi2);
    const double u_next = Norm(s1) + Norm(s2);
    const double rho_next = UpdatePenalty(u_next, u, rho, config.tau,
                                          config.gamma);

    absl::StatusOr<double> e = KktResidual(p, x, lambda1, lambda2, shift);
    if (!e.ok()) return e.status();

    IterationRecord rec;
    rec.k = k + 1;
    rec.E = *e;
    rec.norm_s1 = Norm(s1);
    rec.norm_s2 = Norm(s2);
    rec.r1 = Norm(shift.s1 - oracle->shift.s1);
    rec.r2 = Norm(shift.s2 - oracle->shift.s2);
    rec.rho = rho_next;
    rec.norm_lambda1 = Norm(lambda1);
    rec.norm_lambda2 = Norm(lambda2);
    rec.subproblem_grad_norm = sub->grad_norm;
    rec.eps = eps;
    rec.u = u_next;
    Log().debug(
        "k={} E={:.3e} |s1|={:.3e} |s2|={:.3e} r1={:.3e} r2={:.3e} rho={:.3e} "
        "|l1|={:.3e} |l2|={:.3e}",
        rec.k, rec.E, rec.norm_s1, rec.norm_s2, rec.r1, rec.r2, rec.rho,
        rec.norm_lambda1, rec.norm_lambda2);
    if (config.record_state) {
      rec.state = IterationState{x,       s1,        s2,        lambda1,
                                 lambda2, next_hat1, next_hat2, shift};
    }
    report.trace.push_back(std::move(rec));

    lambda_hat1 = std::move(next_hat1);
    lambda_hat2 = std::move(next_hat2);
    u = u_next;
    rho = rho_next;
    report.x_final = std::move(x);
    report.shift_final = std::move(shift);

    if (report.trace.back().E <= config.kkt_tol) {
      report.status = SolveStatus::kConverged;
      break;
    }
    if (rho > config.rho_cap) {
      report.status = SolveStatus::kDivergenceSuspected;
      break;
    }
  }
  report.objective_final =
      0.5 * report.x_final.dot(p.q * report.x_final) + p.c.dot(report.x_final);
  Log().info("finished with status {} after {} iterations",
             SolveStatusName(report.status), report.trace.size());
  return report;
}

}  // namespace hieralm
