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

#include "hieralm/cli.h"

#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "hieralm/hierarchy_oracle.h"
#include "hieralm/infeasibility_control.h"
#include "hieralm/linalg.h"
#include "hieralm/netflow_gen.h"
#include "hieralm/problem_model.h"
#include "hieralm/random_instance.h"
#include "hieralm/report.h"
#include "json.hpp"
#include "logging.h"

namespace hieralm {
namespace {

using ::nlohmann::json;

constexpr int kExitError = 1;

// Where the problem comes from: exactly one of a file or a generated grid.
struct ProblemSource {
  std::string problem_path;
  std::string grid;  // "RxC"
  double kappa = 0.0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--problem", problem_path, "Instance file (JSON)");
    cmd->add_option("--grid", grid, "Generate an RxC grid instance, e.g. 20x20");
    cmd->add_option("--kappa", kappa, "Supply reduction for --grid")
        ->check(CLI::NonNegativeNumber);
  }
};

// Overrides applied on top of the defaults and an optional config file.
struct ConfigFlags {
  std::string config_path;
  std::string mode;
  std::optional<double> tau, gamma, rho0, u0, kkt_tol, rho_cap;
  std::optional<int> max_iter;

  void Register(CLI::App* cmd, bool with_mode) {
    cmd->add_option("--config", config_path, "Solver config file (JSON)");
    if (with_mode) {
      cmd->add_option("--mode", mode, "infeasibility-control | standard-al")
          ->check(CLI::IsMember({"infeasibility-control", "standard-al"}));
    }
    cmd->add_option("--tau", tau, "Penalty decrease test factor in (0, 1)");
    cmd->add_option("--gamma", gamma, "Penalty growth factor (> 1)");
    cmd->add_option("--rho0", rho0, "Initial penalty");
    cmd->add_option("--u0", u0, "Initial residual reference");
    cmd->add_option("--kkt-tol", kkt_tol, "Termination tolerance on E");
    cmd->add_option("--max-iter", max_iter, "Iteration limit");
    cmd->add_option("--rho-cap", rho_cap, "Penalty level treated as divergence");
  }
};

absl::StatusOr<GridSpec> ParseGrid(const std::string& text, double kappa) {
  std::vector<std::string> parts = absl::StrSplit(text, absl::ByAnyChar("xX"));
  GridSpec spec;
  if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &spec.rows) ||
      !absl::SimpleAtoi(parts[1], &spec.cols)) {
    return absl::InvalidArgumentError(
        absl::StrCat("--grid expects RxC, got '", text, "'"));
  }
  spec.kappa = kappa;
  if (absl::Status s = ValidateGridSpec(spec); !s.ok()) return s;
  return spec;
}

absl::StatusOr<ProblemData> LoadSource(const ProblemSource& source) {
  const bool has_file = !source.problem_path.empty();
  const bool has_grid = !source.grid.empty();
  if (has_file == has_grid) {
    return absl::InvalidArgumentError(
        "specify exactly one of --problem and --grid");
  }
  ProblemData p;
  if (has_file) {
    absl::StatusOr<ProblemData> loaded = LoadProblem(source.problem_path);
    if (!loaded.ok()) return loaded.status();
    p = *std::move(loaded);
  } else {
    absl::StatusOr<GridSpec> spec = ParseGrid(source.grid, source.kappa);
    if (!spec.ok()) return spec.status();
    absl::StatusOr<GridInstance> grid = BuildGridInstance(*spec);
    if (!grid.ok()) return grid.status();
    p = std::move(grid->problem);
  }
  const ValidationReport report = ValidateProblem(p);
  for (const Finding& f : report.findings) {
    if (f.severity == Severity::kWarning) Log().warn("{}", f.message);
  }
  if (!report.ok) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid problem:\n", report.ToString()));
  }
  return p;
}

absl::Status ApplyConfigFile(const std::string& path, SolverConfig& cfg) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  json j;
  try {
    j = json::parse(*text);
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("rho0")) cfg.rho0 = j.at("rho0").get<double>();
    if (j.contains("u0")) cfg.u0 = j.at("u0").get<double>();
    if (j.contains("kkt_tol")) cfg.kkt_tol = j.at("kkt_tol").get<double>();
    if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<int>();
    if (j.contains("rho_cap")) cfg.rho_cap = j.at("rho_cap").get<double>();
    if (j.contains("mode")) {
      const std::string mode = j.at("mode").get<std::string>();
      if (mode != "infeasibility-control" && mode != "standard-al") {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": unknown mode '", mode, "'"));
      }
      cfg.mode = mode == "standard-al" ? SolverMode::kStandardAL
                                       : SolverMode::kInfeasibilityControl;
    }
    for (const auto& [key, box] :
         {std::pair{"box1", &cfg.box1}, std::pair{"box2", &cfg.box2}}) {
      if (!j.contains(key)) continue;
      const json& b = j.at(key);
      const auto read = [](const json& v) {
        std::vector<double> d =
            v.is_array() ? v.get<std::vector<double>>()
                         : std::vector<double>{v.get<double>()};
        return Eigen::VectorXd(
            Eigen::Map<const Eigen::VectorXd>(d.data(), d.size()));
      };
      box->lo = read(b.at("lo"));
      box->hi = read(b.at("hi"));
    }
    if (j.contains("sigma")) {
      const json& s = j.at("sigma");
      const SigmaSchedule& d = cfg.sigma_schedule;
      absl::StatusOr<SigmaSchedule> schedule = SigmaSchedule::Create(
          s.value("sigma1_0", d.sigma1_0()),
          s.value("sigma1_factor", d.sigma1_factor()),
          s.value("sigma2_0", d.sigma2_0()),
          s.value("sigma2_factor", d.sigma2_factor()),
          s.value("eta_cap", d.eta_cap()));
      if (!schedule.ok()) return schedule.status();
      cfg.sigma_schedule = *schedule;
    }
    if (j.contains("eps")) {
      const json& e = j.at("eps");
      cfg.eps_schedule.initial = e.value("initial", cfg.eps_schedule.initial);
      cfg.eps_schedule.factor = e.value("factor", cfg.eps_schedule.factor);
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
  return absl::OkStatus();
}

absl::StatusOr<SolverConfig> BuildConfig(const ConfigFlags& flags) {
  SolverConfig cfg;
  if (!flags.config_path.empty()) {
    if (absl::Status s = ApplyConfigFile(flags.config_path, cfg); !s.ok()) {
      return s;
    }
  }
  if (!flags.mode.empty()) {
    cfg.mode = flags.mode == "standard-al" ? SolverMode::kStandardAL
                                           : SolverMode::kInfeasibilityControl;
  }
  if (flags.tau) cfg.tau = *flags.tau;
  if (flags.gamma) cfg.gamma = *flags.gamma;
  if (flags.rho0) cfg.rho0 = *flags.rho0;
  if (flags.u0) cfg.u0 = *flags.u0;
  if (flags.kkt_tol) cfg.kkt_tol = *flags.kkt_tol;
  if (flags.max_iter) cfg.max_iter = *flags.max_iter;
  if (flags.rho_cap) cfg.rho_cap = *flags.rho_cap;
  return cfg;
}

// Writes to `path`, or to `out` when path is empty.
absl::Status Emit(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteTextFile(path, text);
}

int Fail(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return kExitError;
}

json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::string SiblingPath(const std::string& path, const std::string& tag) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return absl::StrCat(path, ".", tag);
  }
  return absl::StrCat(path.substr(0, dot), ".", tag, path.substr(dot));
}

}  // namespace

int ExitCodeFor(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return 0;
    case SolveStatus::kMaxIter:
      return 2;
    case SolveStatus::kDivergenceSuspected:
      return 3;
  }
  return kExitError;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Augmented Lagrangian solver for convex QPs with prioritized "
               "equality constraints"};
  app.require_subcommand(1);

  // gen-grid
  GridSpec grid_spec;
  std::string grid_text;
  std::string gen_out;
  CLI::App* gen_grid = app.add_subcommand("gen-grid", "Write a grid network instance");
  gen_grid->add_option("--grid", grid_text, "Grid size RxC");
  gen_grid->add_option("--rows", grid_spec.rows, "Grid rows");
  gen_grid->add_option("--cols", grid_spec.cols, "Grid columns");
  gen_grid->add_option("--kappa", grid_spec.kappa, "Supply reduction")
      ->check(CLI::NonNegativeNumber);
  gen_grid->add_option("--q-scale", grid_spec.q_scale, "Q = q_scale * I");
  gen_grid->add_option("--c-scale", grid_spec.c_scale, "c = c_scale * e");
  gen_grid->add_option("--out", gen_out, "Output file (default stdout)");

  // gen-random
  RandomInstanceOptions random_options;
  std::uint64_t seed = 0;
  CLI::App* gen_random =
      app.add_subcommand("gen-random", "Write a small random instance");
  gen_random->add_option("--n", random_options.n, "Variables")
      ->check(CLI::PositiveNumber);
  gen_random->add_option("--m1", random_options.m1, "High-priority rows")
      ->check(CLI::NonNegativeNumber);
  gen_random->add_option("--m2", random_options.m2, "Low-priority rows")
      ->check(CLI::NonNegativeNumber);
  gen_random->add_option("--seed", seed, "Generator seed");
  gen_random->add_flag("--feasible", random_options.feasible,
                       "Make the constraints consistent");
  gen_random->add_option("--out", gen_out, "Output file (default stdout)");

  // solve
  ProblemSource source;
  ConfigFlags flags;
  std::string trace_path;
  std::string report_path;
  std::string table_layout = "full";
  CLI::App* solve = app.add_subcommand("solve", "Run the solver");
  source.Register(solve);
  flags.Register(solve, /*with_mode=*/true);
  solve->add_option("--trace", trace_path, "Per-iteration trace CSV");
  solve->add_option("--out", report_path, "Summary report (JSON)");
  solve->add_option("--table", table_layout, "Table layout: full | penalty")
      ->check(CLI::IsMember({"full", "penalty"}));

  // oracle
  std::string oracle_out;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Compute the exact hierarchically optimal shift");
  source.Register(oracle);
  oracle->add_option("--out", oracle_out, "Write shift vectors (JSON)");

  // shift-sweep
  int steps = 26;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "shift-sweep", "Approximate shifts along the sigma schedule (CSV)");
  source.Register(sweep);
  sweep->add_option("--config", flags.config_path, "Config file with a sigma schedule");
  sweep->add_option("--steps", steps, "Number of schedule steps")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Output CSV (default stdout)");

  // compare
  CLI::App* compare = app.add_subcommand(
      "compare", "Run infeasibility control and standard AL side by side");
  source.Register(compare);
  flags.Register(compare, /*with_mode=*/false);
  compare->add_option("--trace", trace_path,
                      "Trace CSV prefix; one file per mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  if (*gen_grid) {
    if (!grid_text.empty()) {
      absl::StatusOr<GridSpec> parsed = ParseGrid(grid_text, grid_spec.kappa);
      if (!parsed.ok()) return Fail(parsed.status(), err);
      grid_spec.rows = parsed->rows;
      grid_spec.cols = parsed->cols;
    }
    absl::StatusOr<GridInstance> grid = BuildGridInstance(grid_spec);
    if (!grid.ok()) return Fail(grid.status(), err);
    const std::string text =
        SerializeProblem(grid->problem, grid->partition.ToJson());
    if (absl::Status s = Emit(gen_out, text, out); !s.ok()) return Fail(s, err);
    return 0;
  }

  if (*gen_random) {
    std::mt19937_64 rng(seed);
    const ProblemData p = RandomInstance(random_options, rng);
    const std::string meta = json{{"seed", seed}}.dump();
    if (absl::Status s = Emit(gen_out, SerializeProblem(p, meta), out); !s.ok()) {
      return Fail(s, err);
    }
    return 0;
  }

  if (*solve) {
    absl::StatusOr<ProblemData> p = LoadSource(source);
    if (!p.ok()) return Fail(p.status(), err);
    absl::StatusOr<SolverConfig> cfg = BuildConfig(flags);
    if (!cfg.ok()) return Fail(cfg.status(), err);
    absl::StatusOr<SolveReport> report = Run(*p, *cfg);
    if (!report.ok()) return Fail(report.status(), err);

    out << RenderTraceTable(report->trace, table_layout == "penalty"
                                               ? TableLayout::kPenaltyOnly
                                               : TableLayout::kFull);
    out << "status: " << SolveStatusName(report->status) << " after "
        << report->trace.size() << " iterations, objective "
        << FormatExact(report->objective_final) << "\n";
    if (!trace_path.empty()) {
      if (absl::Status s = WriteTextFile(trace_path, TraceToCsv(report->trace));
          !s.ok()) {
        return Fail(s, err);
      }
    }
    if (!report_path.empty()) {
      if (absl::Status s =
              WriteTextFile(report_path, SolveReportToJson(*report) + "\n");
          !s.ok()) {
        return Fail(s, err);
      }
    }
    return ExitCodeFor(report->status);
  }

  if (*oracle) {
    absl::StatusOr<ProblemData> p = LoadSource(source);
    if (!p.ok()) return Fail(p.status(), err);
    absl::StatusOr<OracleResult> result = ComputeHierarchicalShift(*p);
    if (!result.ok()) return Fail(result.status(), err);
    out << "norm_s1 " << FormatExact(Norm(result->shift.s1)) << "\n"
        << "norm_s2 " << FormatExact(Norm(result->shift.s2)) << "\n"
        << "stage1_value " << FormatExact(result->stage1_value) << "\n"
        << "stage2_value " << FormatExact(result->stage2_value) << "\n"
        << "rank1 " << result->rank1 << "\n";
    if (!oracle_out.empty()) {
      json j{{"s1", VectorJson(result->shift.s1)},
             {"s2", VectorJson(result->shift.s2)},
             {"x_dag", VectorJson(result->x_dag)},
             {"x_ddag", VectorJson(result->x_ddag)},
             {"rank1", result->rank1},
             {"stage1_value", result->stage1_value},
             {"stage2_value", result->stage2_value}};
      if (absl::Status s = WriteTextFile(oracle_out, j.dump(2) + "\n"); !s.ok()) {
        return Fail(s, err);
      }
    }
    return 0;
  }

  if (*sweep) {
    absl::StatusOr<ProblemData> p = LoadSource(source);
    if (!p.ok()) return Fail(p.status(), err);
    absl::StatusOr<SolverConfig> cfg = BuildConfig(flags);
    if (!cfg.ok()) return Fail(cfg.status(), err);
    absl::StatusOr<OracleResult> exact = ComputeHierarchicalShift(*p);
    if (!exact.ok()) return Fail(exact.status(), err);
    absl::StatusOr<std::vector<HierarchicalShift>> shifts =
        ApproximateShiftSequence(*p, cfg->sigma_schedule, steps);
    if (!shifts.ok()) return Fail(shifts.status(), err);
    std::string csv = "k,sigma1,sigma2,norm_s1,norm_s2,r1,r2\n";
    for (int k = 0; k < steps; ++k) {
      const HierarchicalShift& s = (*shifts)[k];
      absl::StrAppend(&csv, k, ",", FormatExact(s.sigma1), ",",
                      FormatExact(s.sigma2), ",", FormatExact(Norm(s.s1)), ",",
                      FormatExact(Norm(s.s2)), ",",
                      FormatExact(Norm(s.s1 - exact->shift.s1)), ",",
                      FormatExact(Norm(s.s2 - exact->shift.s2)), "\n");
    }
    if (absl::Status s = Emit(sweep_out, csv, out); !s.ok()) return Fail(s, err);
    return 0;
  }

  if (*compare) {
    absl::StatusOr<ProblemData> p = LoadSource(source);
    if (!p.ok()) return Fail(p.status(), err);
    absl::StatusOr<SolverConfig> cfg = BuildConfig(flags);
    if (!cfg.ok()) return Fail(cfg.status(), err);
    SolverConfig control = *cfg;
    control.mode = SolverMode::kInfeasibilityControl;
    SolverConfig standard = *cfg;
    standard.mode = SolverMode::kStandardAL;
    const ProblemData& problem = *p;
    auto standard_run = std::async(std::launch::async,
                                   [&] { return Run(problem, standard); });
    absl::StatusOr<SolveReport> a = Run(problem, control);
    absl::StatusOr<SolveReport> b = standard_run.get();
    if (!a.ok()) return Fail(a.status(), err);
    if (!b.ok()) return Fail(b.status(), err);

    const auto row = [&](const char* name, const std::string& x,
                         const std::string& y) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-14s %-24s %-24s\n", name, x.c_str(),
                    y.c_str());
      out << line;
    };
    const IterationRecord empty;
    const IterationRecord& la = a->trace.empty() ? empty : a->trace.back();
    const IterationRecord& lb = b->trace.empty() ? empty : b->trace.back();
    row("", "infeasibility-control", "standard-al");
    row("status", SolveStatusName(a->status), SolveStatusName(b->status));
    row("iterations", std::to_string(a->trace.size()),
        std::to_string(b->trace.size()));
    row("final E", FormatSci3(la.E), FormatSci3(lb.E));
    row("final rho", FormatSci3(la.rho), FormatSci3(lb.rho));
    row("|lambda1|", FormatSci3(la.norm_lambda1), FormatSci3(lb.norm_lambda1));
    row("|lambda2|", FormatSci3(la.norm_lambda2), FormatSci3(lb.norm_lambda2));
    row("objective", FormatSci3(a->objective_final),
        FormatSci3(b->objective_final));
    if (!trace_path.empty()) {
      for (const auto& [tag, r] :
           {std::pair{"infeasibility-control", &*a},
            std::pair{"standard-al", &*b}}) {
        if (absl::Status s = WriteTextFile(SiblingPath(trace_path, tag),
                                           TraceToCsv(r->trace));
            !s.ok()) {
          return Fail(s, err);
        }
      }
    }
    return ExitCodeFor(a->status);
  }
  return kExitError;
}

}  // namespace hieralm
