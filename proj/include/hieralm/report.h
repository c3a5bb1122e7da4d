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

#ifndef HIERALM_REPORT_H_
#define HIERALM_REPORT_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hieralm/alm_solver.h"

namespace hieralm {

// Scientific notation with three significant digits, e.g. "5.12e+00".
std::string FormatSci3(double v);

// Shortest decimal string that parses back to exactly `v`.
std::string FormatExact(double v);

enum class TableLayout {
  kFull,         // k, E, ||s1||, ||s2||, r1, r2, rho, ||lambda1||, ||lambda2||
  kPenaltyOnly,  // k, rho, ||lambda1||, ||lambda2||
};

std::string RenderTraceTable(const std::vector<IterationRecord>& trace,
                             TableLayout layout = TableLayout::kFull);

// CSV with header k,E,norm_s1,norm_s2,r1,r2,rho,norm_lambda1,norm_lambda2 and
// full-precision values. Reading back reproduces those fields exactly.
std::string TraceToCsv(const std::vector<IterationRecord>& trace);
absl::StatusOr<std::vector<IterationRecord>> TraceFromCsv(
    const std::string& text);

absl::Status WriteTextFile(const std::string& path, const std::string& text);
absl::StatusOr<std::string> ReadTextFile(const std::string& path);

// JSON summary of a solve: status, iteration count, final values and x.
std::string SolveReportToJson(const SolveReport& report);

}  // namespace hieralm

#endif  // HIERALM_REPORT_H_
