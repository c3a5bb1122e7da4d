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

#ifndef HIERALM_CLI_H_
#define HIERALM_CLI_H_

#include <ostream>

#include "hieralm/alm_solver.h"

namespace hieralm {

// 0 Converged, 2 MaxIter, 3 DivergenceSuspected. Errors exit with 1.
int ExitCodeFor(SolveStatus status);

// Entry point of the `hieralm` tool. Subcommands: gen-grid, gen-random,
// solve, oracle, shift-sweep, compare. Returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace hieralm

#endif  // HIERALM_CLI_H_
