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

#ifndef HIERALM_PROBLEM_MODEL_H_
#define HIERALM_PROBLEM_MODEL_H_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace hieralm {

// Convex QP with two priority levels of equality constraints:
//
//   minimize    1/2 x^T Q x + c^T x
//   subject to  A1 x - b1 = 0   (high priority)
//               A2 x - b2 = 0   (low priority)
//
// Either block may be empty (zero rows). Instances are treated as immutable
// once built; every operation on them is a pure function.
struct ProblemData {
  Eigen::MatrixXd q;
  Eigen::VectorXd c;
  Eigen::MatrixXd a1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd a2;
  Eigen::VectorXd b2;

  Eigen::Index n() const { return c.size(); }
  Eigen::Index m1() const { return b1.size(); }
  Eigen::Index m2() const { return b2.size(); }
  Eigen::Index m() const { return m1() + m2(); }

  // [A1; A2] and [b1; b2].
  Eigen::MatrixXd StackedA() const;
  Eigen::VectorXd StackedB() const;
};

enum class ShiftKind { kOracleExact, kSigmaApproximate };

// A shift (s1, s2) added to the constraint residuals, together with where it
// came from. sigma1/sigma2 are meaningful only for kSigmaApproximate.
struct HierarchicalShift {
  Eigen::VectorXd s1;
  Eigen::VectorXd s2;
  ShiftKind kind = ShiftKind::kOracleExact;
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  static HierarchicalShift Zero(const ProblemData& p);
  // Checks lengths against `p` and positivity of sigma for approximate shifts.
  absl::Status CheckCompatible(const ProblemData& p) const;
};

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Finding> findings;

  void Add(Severity severity, std::string message);
  std::string ToString() const;
};

// Structural and convexity checks. Never fails; problems are reported as
// findings. A singular (PSD but not PD) Q yields a warning only.
ValidationReport ValidateProblem(const ProblemData& p);

// 1/2 x^T Q x + c^T x.
absl::StatusOr<double> ObjectiveValue(const ProblemData& p,
                                      const Eigen::VectorXd& x);

// (A1 x - b1 + s1, A2 x - b2 + s2).
absl::StatusOr<std::pair<Eigen::VectorXd, Eigen::VectorXd>>
ConstraintResiduals(const ProblemData& p, const Eigen::VectorXd& x,
                    const HierarchicalShift& shift);

// Instance files are JSON documents with fields n, m1, m2, Q, c, A1, b1, A2,
// b2. Matrices are either dense (array of rows) or COO objects of the form
// {"format": "coo", "rows": R, "cols": C, "entries": [[i, j, v], ...]}.
// Doubles are written in shortest round-trip form, so save/load is
// bit-exact. An optional "metadata" object is preserved as opaque JSON text.
absl::StatusOr<ProblemData> ParseProblem(const std::string& text);
std::string SerializeProblem(const ProblemData& p,
                             const std::string& metadata_json = "");
absl::StatusOr<ProblemData> LoadProblem(const std::string& path);
absl::Status SaveProblem(const ProblemData& p, const std::string& path,
                         const std::string& metadata_json = "");

}  // namespace hieralm

#endif  // HIERALM_PROBLEM_MODEL_H_
