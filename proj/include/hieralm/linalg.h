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

#ifndef HIERALM_LINALG_H_
#define HIERALM_LINALG_H_

#include <Eigen/Core>

namespace hieralm {

// Relative rank tolerance max(rows, cols) * machine-eps. Pivots at or below
// this fraction of the largest pivot are treated as zero.
double RankThreshold(Eigen::Index rows, Eigen::Index cols);

struct LeastSquaresSolution {
  Eigen::VectorXd x;
  Eigen::Index rank = 0;
};

// Minimum-norm minimizer of ||a x - b||, computed with a complete orthogonal
// decomposition at RankThreshold. Zero-row systems yield x = 0, rank 0.
LeastSquaresSolution MinNormLeastSquares(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& b);

// Orthonormal basis of null(a) with n - rank columns, from a column-pivoted
// QR of a^T. `rank` is the numerical rank of `a`.
Eigen::MatrixXd NullSpaceBasis(const Eigen::MatrixXd& a, Eigen::Index rank);

// Z z for the min-norm z minimizing ||r - b Z z||, where Z is the
// orthonormal null-space basis of `a` from NullSpaceBasis. Q is applied
// implicitly, so this is cheap even when null(a) is large.
Eigen::VectorXd NullSpaceLeastSquares(const Eigen::MatrixXd& a,
                                      Eigen::Index rank,
                                      const Eigen::MatrixXd& b,
                                      const Eigen::VectorXd& r);

// Euclidean norm; zero for empty vectors.
inline double Norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.norm();
}

}  // namespace hieralm

#endif  // HIERALM_LINALG_H_
