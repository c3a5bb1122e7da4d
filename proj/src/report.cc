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

#include "hieralm/report.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "hieralm/linalg.h"
#include "json.hpp"

namespace hieralm {
namespace {

constexpr char kCsvHeader[] =
    "k,E,norm_s1,norm_s2,r1,r2,rho,norm_lambda1,norm_lambda2";

absl::StatusOr<double> ParseDouble(absl::string_view s, int line,
                                   int column) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(absl::StrCat(
        "trace CSV line ", line, ", column ", column, ": bad number '", s, "'"));
  }
  return v;
}

}  // namespace

std::string FormatSci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string FormatExact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string RenderTraceTable(const std::vector<IterationRecord>& trace,
                             TableLayout layout) {
  std::ostringstream out;
  char line[256];
  if (layout == TableLayout::kFull) {
    std::snprintf(line, sizeof(line),
                  "%4s %10s %10s %10s %10s %10s %10s %10s %10s\n", "k", "E",
                  "|s1|", "|s2|", "r1", "r2", "rho", "|lambda1|", "|lambda2|");
    out << line;
    for (const IterationRecord& r : trace) {
      std::snprintf(line, sizeof(line),
                    "%4d %10s %10s %10s %10s %10s %10s %10s %10s\n", r.k,
                    FormatSci3(r.E).c_str(), FormatSci3(r.norm_s1).c_str(),
                    FormatSci3(r.norm_s2).c_str(), FormatSci3(r.r1).c_str(),
                    FormatSci3(r.r2).c_str(), FormatSci3(r.rho).c_str(),
                    FormatSci3(r.norm_lambda1).c_str(),
                    FormatSci3(r.norm_lambda2).c_str());
      out << line;
    }
    return out.str();
  }
  std::snprintf(line, sizeof(line), "%4s %10s %10s %10s\n", "k", "rho",
                "|lambda1|", "|lambda2|");
  out << line;
  for (const IterationRecord& r : trace) {
    std::snprintf(line, sizeof(line), "%4d %10s %10s %10s\n", r.k,
                  FormatSci3(r.rho).c_str(),
                  FormatSci3(r.norm_lambda1).c_str(),
                  FormatSci3(r.norm_lambda2).c_str());
    out << line;
  }
  return out.str();
}

std::string TraceToCsv(const std::vector<IterationRecord>& trace) {
  std::string out = absl::StrCat(kCsvHeader, "\n");
  for (const IterationRecord& r : trace) {
    absl::StrAppend(&out, r.k, ",", FormatExact(r.E), ",",
                    FormatExact(r.norm_s1), ",", FormatExact(r.norm_s2), ",",
                    FormatExact(r.r1), ",", FormatExact(r.r2), ",",
                    FormatExact(r.rho), ",", FormatExact(r.norm_lambda1), ",",
                    FormatExact(r.norm_lambda2), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<IterationRecord>> TraceFromCsv(
    const std::string& text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || absl::StripSuffix(lines[0], "\r") != kCsvHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("trace CSV must start with header '", kCsvHeader, "'"));
  }
  std::vector<IterationRecord> trace;
  for (size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::vector<absl::string_view> cells =
        absl::StrSplit(absl::StripSuffix(lines[i], "\r"), ',');
    if (cells.size() != 9) {
      return absl::InvalidArgumentError(absl::StrCat(
          "trace CSV line ", line_no, ": expected 9 columns, got ",
          cells.size()));
    }
    double values[9];
    for (int c = 0; c < 9; ++c) {
      absl::StatusOr<double> v = ParseDouble(cells[c], line_no, c + 1);
      if (!v.ok()) return v.status();
      values[c] = *v;
    }
    IterationRecord r;
    r.k = static_cast<int>(values[0]);
    r.E = values[1];
    r.norm_s1 = values[2];
    r.norm_s2 = values[3];
    r.r1 = values[4];
    r.r2 = values[5];
    r.rho = values[6];
    r.norm_lambda1 = values[7];
    r.norm_lambda2 = values[8];
    trace.push_back(r);
  }
  return trace;
}

absl::Status WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string SolveReportToJson(const SolveReport& report) {
  nlohmann::json j;
  j["status"] = SolveStatusName(report.status);
  j["iterations"] = report.trace.size();
  j["objective"] = report.objective_final;
  if (!report.trace.empty()) {
    const IterationRecord& last = report.trace.back();
    j["final"] = {{"E", last.E},
                  {"norm_s1", last.norm_s1},
                  {"norm_s2", last.norm_s2},
                  {"r1", last.r1},
                  {"r2", last.r2},
                  {"rho", last.rho},
                  {"norm_lambda1", last.norm_lambda1},
                  {"norm_lambda2", last.norm_lambda2}};
  }
  j["oracle"] = {{"norm_s1", Norm(report.oracle_shift.s1)},
                 {"norm_s2", Norm(report.oracle_shift.s2)}};
  j["x"] = std::vector<double>(report.x_final.data(),
                               report.x_final.data() + report.x_final.size());
  return j.dump(2);
}

}  // namespace hieralm
