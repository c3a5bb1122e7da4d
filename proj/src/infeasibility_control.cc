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

#include "hieralm/infeasibility_control.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "hieralm/linalg.h"

namespace hieralm {

absl::StatusOr<SigmaSchedule> SigmaSchedule::Create(double sigma1_0,
                                                    double sigma1_factor,
                                                    double sigma2_0,
                                                    double sigma2_factor,
                                                    double eta_cap) {
  const double values[] = {sigma1_0, sigma1_factor, sigma2_0, sigma2_factor,
                           eta_cap};
  for (double v : values) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("sigma schedule values must be finite");
    }
  }
  if (!(sigma1_0 > 0) || !(sigma2_0 > 0)) {
    return absl::InvalidArgumentError("initial sigmas must be positive");
  }
  if (!(sigma2_factor >= 1.0) || !(sigma1_factor > sigma2_factor)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need sigma1_factor > sigma2_factor >= 1 so that sigma1/sigma2 grows "
        "without bound; got ",
        sigma1_factor, " and ", sigma2_factor));
  }
  if (!(eta_cap >= 1.0)) {
    return absl::InvalidArgumentError("eta_cap must be at least 1");
  }
  SigmaSchedule s;
  s.sigma1_0_ = sigma1_0;
  s.sigma1_factor_ = sigma1_factor;
  s.sigma2_0_ = sigma2_0;
  s.sigma2_factor_ = sigma2_factor;
  s.eta_cap_ = eta_cap;
  return s;
}

SigmaPair SigmaSchedule::At(int k) const {
  k = std::max(k, 0);
  SigmaPair out;
  out.sigma1 = sigma1_0_ * std::pow(sigma1_factor_, k);
  out.sigma2 = sigma2_0_ * std::pow(sigma2_factor_, k);
  if (!std::isfinite(out.sigma1) || !std::isfinite(out.sigma2) ||
      out.sigma1 > kSigma1Ceiling) {
    // Work in logs so large k cannot overflow.
    const double log1 = std::log(sigma1_0_) + k * std::log(sigma1_factor_);
    const double log2 = std::log(sigma2_0_) + k * std::log(sigma2_factor_);
    const double excess = std::max(0.0, log1 - std::log(kSigma1Ceiling));
    out.sigma1 = std::exp(log1 - excess);
    out.sigma2 = std::exp(log2 - excess);
  }
  if (!(out.sigma1 <= eta_cap_ * out.sigma2)) {
    out.sigma2 = out.sigma1 / eta_cap_;
    out.eta_capped = true;
  }
  return out;
}

absl::StatusOr<RsigmaSolution> SolveRsigma(const ProblemData& p,
                                           const SigmaPair& sigma) {
  if (!(sigma.sigma1 > 0) || !(sigma.sigma2 > 0) ||
      !std::isfinite(sigma.sigma1) || !std::isfinite(sigma.sigma2)) {
    return absl::InvalidArgumentError("sigma must be finite and positive");
  }
  if (!p.a1.allFinite() || !p.b1.allFinite() || !p.a2.allFinite() ||
      !p.b2.allFinite()) {
    return absl::InvalidArgumentError("constraint data has non-finite entries");
  }
  const double w1 = std::sqrt(sigma.sigma1);
  const double w2 = std::sqrt(sigma.sigma2);
  Eigen::MatrixXd weighted(p.m(), p.n());
  Eigen::VectorXd rhs(p.m());
  if (p.m1() > 0) {
    weighted.topRows(p.m1()) = w1 * p.a1;
    rhs.head(p.m1()) = w1 * p.b1;
  }
  if (p.m2() > 0) {
    weighted.bottomRows(p.m2()) = w2 * p.a2;
    rhs.tail(p.m2()) = w2 * p.b2;
  }

  RsigmaSolution out;
  out.x_bar = MinNormLeastSquares(weighted, rhs).x;
  out.shift.kind = ShiftKind::kSigmaApproximate;
  out.shift.sigma1 = sigma.sigma1;
  out.shift.sigma2 = sigma.sigma2;
  out.shift.s1 = Eigen::VectorXd(p.m1());
  out.shift.s2 = Eigen::VectorXd(p.m2());
  if (p.m1() > 0) out.shift.s1 = p.b1 - p.a1 * out.x_bar;
  if (p.m2() > 0) out.shift.s2 = p.b2 - p.a2 * out.x_bar;
  return out;
}

absl::StatusOr<std::vector<HierarchicalShift>> ApproximateShiftSequence(
    const ProblemData& p, const SigmaSchedule& schedule, int count) {
  if (count < 1) return absl::InvalidArgumentError("count must be at least 1");
  std::vector<HierarchicalShift> shifts;
  shifts.reserve(count);
  for (int k = 0; k < count; ++k) {
    absl::StatusOr<RsigmaSolution> solution = SolveRsigma(p, schedule.At(k));
    if (!solution.ok()) return solution.status();
    shifts.push_back(std::move(solution->shift));
  }
  return shifts;
}

}  // namespace hieralm
