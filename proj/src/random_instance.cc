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

#include "hieralm/random_instance.h"

#include <cmath>

namespace hieralm {
namespace {

Eigen::MatrixXd Uniform(Eigen::Index rows, Eigen::Index cols, double bound,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

// Uniform over {-bound, -bound + step, ..., bound}.
Eigen::MatrixXd Lattice(Eigen::Index rows, Eigen::Index cols, double bound,
                        double step, std::mt19937_64& rng) {
  const int half = static_cast<int>(std::lround(bound / step));
  std::uniform_int_distribution<int> dist(-half, half);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng) * step;
  }
  return m;
}

}  // namespace

ProblemData RandomInstance(const RandomInstanceOptions& options,
                           std::mt19937_64& rng) {
  const int n = options.n;
  const double bound = options.entry_bound;
  ProblemData p;
  const Eigen::MatrixXd b = Uniform(n, n, 1.0, rng);
  p.q = b.transpose() * b / n + 0.1 * Eigen::MatrixXd::Identity(n, n);
  p.c = Uniform(n, 1, 1.0, rng);

  if (options.lattice) {
    p.a1 = Lattice(options.m1, n, bound, 0.5, rng);
    p.a2 = Lattice(options.m2, n, bound, 0.5, rng);
    const Eigen::VectorXd x1 = Lattice(n, 1, bound, 0.05, rng);
    const Eigen::VectorXd x2 =
        options.feasible ? x1 : Eigen::VectorXd(Lattice(n, 1, bound, 0.05, rng));
    p.b1 = p.a1 * x1;
    p.b2 = p.a2 * x2;
    return p;
  }

  p.a1 = Uniform(options.m1, n, bound, rng);
  p.a2 = Uniform(options.m2, n, bound, rng);
  if (options.feasible) {
    const Eigen::VectorXd x0 = Uniform(n, 1, bound, rng);
    p.b1 = p.a1 * x0;
    p.b2 = p.a2 * x0;
  } else {
    p.b1 = Uniform(options.m1, 1, bound, rng);
    p.b2 = Uniform(options.m2, 1, bound, rng);
  }
  return p;
}

}  // namespace hieralm
