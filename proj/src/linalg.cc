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

#include "hieralm/linalg.h"

#include <algorithm>
#include <limits>

#include <Eigen/QR>

namespace hieralm {
namespace {

Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> Cod(
    const Eigen::MatrixXd& a, double threshold) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(threshold);
  cod.compute(a);
  return cod;
}

}  // namespace

double RankThreshold(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max<Eigen::Index>({rows, cols, 1})) *
         std::numeric_limits<double>::epsilon();
}

LeastSquaresSolution MinNormLeastSquares(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& b) {
  LeastSquaresSolution out;
  out.x = Eigen::VectorXd::Zero(a.cols());
  if (a.rows() == 0 || a.cols() == 0) return out;
  if (a.cwiseAbs().maxCoeff() == 0.0) return out;
  const double threshold = RankThreshold(a.rows(), a.cols());

  if (a.rows() >= a.cols()) {
    auto cod = Cod(a, threshold);
    out.rank = cod.rank();
    out.x = cod.solve(b);
    return out;
  }

  // Wide system: a^T = Q R with Q having orthonormal columns. The min-norm
  // solution lies in range(a^T), a subset of range(Q), so x = Q z with z the
  // min-norm solution of R^T z ~ b. Householder QR is columnwise backward
  // stable, so large row weights in `a` are harmless here.
  const Eigen::Index m = a.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  const Eigen::MatrixXd rt =
      qr.matrixQR().topRows(m).triangularView<Eigen::Upper>().transpose();
  auto cod = Cod(rt, threshold);
  out.rank = cod.rank();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  z.head(m) = cod.solve(b);
  out.x = qr.householderQ() * z;
  return out;
}

Eigen::MatrixXd NullSpaceBasis(const Eigen::MatrixXd& a, Eigen::Index rank) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || rank == 0) return Eigen::MatrixXd::Identity(n, n);
  if (rank >= n) return Eigen::MatrixXd(n, 0);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - rank);
}

Eigen::VectorXd NullSpaceLeastSquares(const Eigen::MatrixXd& a,
                                      Eigen::Index rank,
                                      const Eigen::MatrixXd& b,
                                      const Eigen::VectorXd& r) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || rank == 0) return MinNormLeastSquares(b, r).x;
  if (rank >= n || b.rows() == 0) return Eigen::VectorXd::Zero(n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  // Columns rank..n-1 of Q span null(a); form (b Q) without materializing Q.
  Eigen::MatrixXd bq = b.transpose();
  bq.applyOnTheLeft(qr.householderQ().adjoint());
  const Eigen::MatrixXd reduced = bq.bottomRows(n - rank).transpose();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  y.tail(n - rank) = MinNormLeastSquares(reduced, r).x;
  return qr.householderQ() * y;
}

}  // namespace hieralm
