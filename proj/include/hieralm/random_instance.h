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

#ifndef HIERALM_RANDOM_INSTANCE_H_
#define HIERALM_RANDOM_INSTANCE_H_

#include <cstdint>
#include <random>

#include "hieralm/problem_model.h"

namespace hieralm {

struct RandomInstanceOptions {
  int n = 3;
  int m1 = 2;
  int m2 = 2;
  // Entries of A1, A2, b1, b2 are uniform in [-entry_bound, entry_bound].
  double entry_bound = 2.0;
  // b = A x0 for a single random x0, so the constraints are consistent.
  bool feasible = false;
  // Entries of A are multiples of 0.5 and b1 = A1 x0 with x0 on the 0.05
  // lattice, so the stage-1 optimal set contains lattice points. b2 comes from
  // an independent lattice point.
  bool lattice = false;
};

// Random instance with Q = B^T B / n + 0.1 I (positive definite) and c
// uniform in [-1, 1]. Deterministic for a given generator state.
ProblemData RandomInstance(const RandomInstanceOptions& options,
                           std::mt19937_64& rng);

}  // namespace hieralm

#endif  // HIERALM_RANDOM_INSTANCE_H_
