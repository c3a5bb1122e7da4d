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

#ifndef HIERALM_INFEASIBILITY_CONTROL_H_
#define HIERALM_INFEASIBILITY_CONTROL_H_

#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "hieralm/problem_model.h"

namespace hieralm {

// Weights (sigma1, sigma2) of the two residual blocks. `eta_capped` is set
// when sigma2 was raised to hold sigma1 / sigma2 at the schedule's cap.
struct SigmaPair {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  bool eta_capped = false;

  double eta() const { return sigma1 / sigma2; }
};

// Geometric weight schedule sigma_i^(k) = sigma_i0 * factor_i^k. The ratio
// eta^(k) grows strictly because sigma1_factor > sigma2_factor >= 1.
class SigmaSchedule {
 public:
  static constexpr double kSigma1Ceiling = 1e12;

  // Defaults: sigma1 1, x10; sigma2 1, x1.1; eta capped at 1e12.
  SigmaSchedule() = default;

  static absl::StatusOr<SigmaSchedule> Create(double sigma1_0,
                                              double sigma1_factor,
                                              double sigma2_0,
                                              double sigma2_factor,
                                              double eta_cap = 1e12);

  // Both weights are rescaled jointly so sigma1 <= 1e12 (the minimizer only
  // depends on eta), then sigma2 is raised if eta exceeds eta_cap.
  SigmaPair At(int k) const;

  double sigma1_0() const { return sigma1_0_; }
  double sigma1_factor() const { return sigma1_factor_; }
  double sigma2_0() const { return sigma2_0_; }
  double sigma2_factor() const { return sigma2_factor_; }
  double eta_cap() const { return eta_cap_; }

 private:
  double sigma1_0_ = 1.0;
  double sigma1_factor_ = 10.0;
  double sigma2_0_ = 1.0;
  double sigma2_factor_ = 1.1;
  double eta_cap_ = 1e12;
};

inline SigmaPair SigmaAt(const SigmaSchedule& schedule, int k) {
  return schedule.At(k);
}

struct RsigmaSolution {
  Eigen::VectorXd x_bar;
  HierarchicalShift shift;  // kind == kSigmaApproximate
};

// Minimizes sigma1 ||b1 - A1 x||^2 + sigma2 ||b2 - A2 x||^2 by a min-norm
// least-squares solve of the row-scaled system
// [sqrt(sigma1) A1; sqrt(sigma2) A2] x ~ [sqrt(sigma1) b1; sqrt(sigma2) b2],
// and returns the residual shift (b1 - A1 x_bar, b2 - A2 x_bar).
absl::StatusOr<RsigmaSolution> SolveRsigma(const ProblemData& p,
                                           const SigmaPair& sigma);

// Element k is SolveRsigma(p, schedule.At(k)).shift, k = 0..count-1.
absl::StatusOr<std::vector<HierarchicalShift>> ApproximateShiftSequence(
    const ProblemData& p, const SigmaSchedule& schedule, int count);

}  // namespace hieralm

#endif  // HIERALM_INFEASIBILITY_CONTROL_H_
