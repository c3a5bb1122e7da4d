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

#include "hieralm/problem_model.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "absl/strings/str_cat.h"
#include "hieralm/linalg.h"
#include "json.hpp"

namespace hieralm {
namespace {

using ::nlohmann::json;

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-8;

bool AllFinite(const Eigen::MatrixXd& m) { return m.allFinite(); }

std::string DimString(const Eigen::MatrixXd& m) {
  return absl::StrCat(m.rows(), "x", m.cols());
}

}  // namespace

Eigen::MatrixXd ProblemData::StackedA() const {
  Eigen::MatrixXd a(m(), n());
  if (m1() > 0) a.topRows(m1()) = a1;
  if (m2() > 0) a.bottomRows(m2()) = a2;
  return a;
}

Eigen::VectorXd ProblemData::StackedB() const {
  Eigen::VectorXd b(m());
  b << b1, b2;
  return b;
}

HierarchicalShift HierarchicalShift::Zero(const ProblemData& p) {
  HierarchicalShift shift;
  shift.s1 = Eigen::VectorXd::Zero(p.m1());
  shift.s2 = Eigen::VectorXd::Zero(p.m2());
  return shift;
}

absl::Status HierarchicalShift::CheckCompatible(const ProblemData& p) const {
  if (s1.size() != p.m1() || s2.size() != p.m2()) {
    return absl::InvalidArgumentError(
        absl::StrCat("shift lengths (", s1.size(), ", ", s2.size(),
                     ") do not match (m1, m2) = (", p.m1(), ", ", p.m2(),
                     ")"));
  }
  if (kind == ShiftKind::kSigmaApproximate && !(sigma1 > 0 && sigma2 > 0)) {
    return absl::InvalidArgumentError(
        "approximate shift requires sigma1 > 0 and sigma2 > 0");
  }
  return absl::OkStatus();
}

void ValidationReport::Add(Severity severity, std::string message) {
  if (severity == Severity::kError) ok = false;
  findings.push_back({severity, std::move(message)});
}

std::string ValidationReport::ToString() const {
  std::string out;
  for (const Finding& f : findings) {
    absl::StrAppend(&out, f.severity == Severity::kError ? "error: " : "warning: ",
                    f.message, "\n");
  }
  return out;
}

ValidationReport ValidateProblem(const ProblemData& p) {
  ValidationReport report;
  const Eigen::Index n = p.n();
  if (n < 1) {
    report.Add(Severity::kError, "dimension mismatch: n must be at least 1");
    return report;
  }
  bool dims_ok = true;
  auto check_dims = [&](const Eigen::MatrixXd& m, Eigen::Index rows,
                        Eigen::Index cols, const char* name) {
    // Zero-row blocks may come with any column count.
    if (rows == 0 && m.rows() == 0) return;
    if (m.rows() != rows || m.cols() != cols) {
      dims_ok = false;
      report.Add(Severity::kError,
                 absl::StrCat("dimension mismatch: ", name, " is ",
                              DimString(m), ", expected ", rows, "x", cols));
    }
  };
  check_dims(p.q, n, n, "Q");
  check_dims(p.a1, p.m1(), n, "A1");
  check_dims(p.a2, p.m2(), n, "A2");

  const std::pair<const Eigen::MatrixXd*, const char*> blocks[] = {
      {&p.q, "Q"}, {&p.a1, "A1"}, {&p.a2, "A2"}};
  for (const auto& [m, name] : blocks) {
    if (!AllFinite(*m)) {
      report.Add(Severity::kError, absl::StrCat(name, " has non-finite entries"));
    }
  }
  const std::pair<const Eigen::VectorXd*, const char*> vectors[] = {
      {&p.c, "c"}, {&p.b1, "b1"}, {&p.b2, "b2"}};
  for (const auto& [v, name] : vectors) {
    if (!AllFinite(*v)) {
      report.Add(Severity::kError, absl::StrCat(name, " has non-finite entries"));
    }
  }
  if (!dims_ok || !report.ok) return report;

  const double asym = (p.q - p.q.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    report.Add(Severity::kError,
               absl::StrCat("Q not symmetric: max |Q_ij - Q_ji| = ", asym));
    return report;
  }

  // A well-conditioned Cholesky factor proves definiteness without an
  // eigendecomposition.
  Eigen::LLT<Eigen::MatrixXd> llt(p.q);
  if (llt.info() == Eigen::Success) {
    const Eigen::VectorXd d = llt.matrixLLT().diagonal().cwiseAbs2();
    if (d.minCoeff() > 1e-6 * d.maxCoeff()) return report;
  }

  const double q_inf = p.q.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = kPsdTol * (1.0 + q_inf);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p.q,
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    report.Add(Severity::kError,
               absl::StrCat("Q not PSD: smallest eigenvalue ", min_eig));
  } else if (min_eig <= tol) {
    report.Add(Severity::kWarning,
               "Q is singular; subproblem solvability is checked at solve time");
  }
  return report;
}

absl::StatusOr<double> ObjectiveValue(const ProblemData& p,
                                      const Eigen::VectorXd& x) {
  if (x.size() != p.n()) {
    return absl::InvalidArgumentError(
        absl::StrCat("x has length ", x.size(), ", expected ", p.n()));
  }
  return 0.5 * x.dot(p.q * x) + p.c.dot(x);
}

absl::StatusOr<std::pair<Eigen::VectorXd, Eigen::VectorXd>>
ConstraintResiduals(const ProblemData& p, const Eigen::VectorXd& x,
                    const HierarchicalShift& shift) {
  if (x.size() != p.n()) {
    return absl::InvalidArgumentError(
        absl::StrCat("x has length ", x.size(), ", expected ", p.n()));
  }
  if (absl::Status s = shift.CheckCompatible(p); !s.ok()) return s;
  Eigen::VectorXd r1 = Eigen::VectorXd::Zero(p.m1());
  Eigen::VectorXd r2 = Eigen::VectorXd::Zero(p.m2());
  if (p.m1() > 0) r1 = p.a1 * x - p.b1 + shift.s1;
  if (p.m2() > 0) r2 = p.a2 * x - p.b2 + shift.s2;
  return std::make_pair(std::move(r1), std::move(r2));
}

// --- Instance file I/O -------------------------------------------------------

namespace {

bool IsPositiveZero(double v) { return v == 0.0 && !std::signbit(v); }

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat("field '", field, "': ", what));
}

absl::StatusOr<double> ReadNumber(const json& j, const std::string& field) {
  if (!j.is_number()) {
    return FieldError(field, absl::StrCat("expected a number, got ", j.dump()));
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) return FieldError(field, "non-finite value");
  return v;
}

absl::StatusOr<Eigen::Index> ReadCount(const json& doc, const char* key) {
  if (!doc.contains(key)) return FieldError(key, "missing");
  const json& j = doc.at(key);
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    return FieldError(key, "expected a nonnegative integer");
  }
  return static_cast<Eigen::Index>(j.get<long long>());
}

absl::StatusOr<Eigen::VectorXd> ReadVector(const json& doc, const char* key,
                                           Eigen::Index size) {
  if (!doc.contains(key)) return FieldError(key, "missing");
  const json& j = doc.at(key);
  if (!j.is_array()) return FieldError(key, "expected an array");
  if (static_cast<Eigen::Index>(j.size()) != size) {
    return FieldError(key, absl::StrCat("has ", j.size(),
                                        " entries, declared size is ", size));
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    absl::StatusOr<double> x = ReadNumber(j[i], absl::StrCat(key, "[", i, "]"));
    if (!x.ok()) return x.status();
    v[i] = *x;
  }
  return v;
}

absl::StatusOr<Eigen::MatrixXd> ReadMatrix(const json& doc, const char* key,
                                           Eigen::Index rows,
                                           Eigen::Index cols) {
  if (!doc.contains(key)) return FieldError(key, "missing");
  const json& j = doc.at(key);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  if (j.is_array()) {
    if (static_cast<Eigen::Index>(j.size()) != rows) {
      return FieldError(key, absl::StrCat("has ", j.size(),
                                          " rows, declared row count is ",
                                          rows));
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = j[i];
      const std::string row_field = absl::StrCat(key, "[", i, "]");
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        return FieldError(row_field,
                          absl::StrCat("expected an array of ", cols, " numbers"));
      }
      for (Eigen::Index k = 0; k < cols; ++k) {
        absl::StatusOr<double> x =
            ReadNumber(row[k], absl::StrCat(row_field, "[", k, "]"));
        if (!x.ok()) return x.status();
        m(i, k) = *x;
      }
    }
    return m;
  }
  if (!j.is_object() || j.value("format", "") != "coo") {
    return FieldError(key, "expected a dense array of rows or a COO object");
  }
  const std::string k = key;
  if (j.value("rows", -1LL) != rows || j.value("cols", -1LL) != cols) {
    return FieldError(k, absl::StrCat("COO shape does not match declared ",
                                      rows, "x", cols));
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    return FieldError(k + ".entries", "expected an array of [i, j, v]");
  }
  const json& entries = j["entries"];
  for (size_t e = 0; e < entries.size(); ++e) {
    const json& t = entries[e];
    const std::string f = absl::StrCat(k, ".entries[", e, "]");
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
        !t[1].is_number_integer()) {
      return FieldError(f, "expected [row, col, value]");
    }
    const long long r = t[0].get<long long>();
    const long long c = t[1].get<long long>();
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      return FieldError(f, "index out of range");
    }
    absl::StatusOr<double> v = ReadNumber(t[2], f);
    if (!v.ok()) return v.status();
    // Duplicates accumulate; a lone -0.0 keeps its sign.
    m(r, c) = IsPositiveZero(m(r, c)) ? *v : m(r, c) + *v;
  }
  return m;
}

std::string Num(double v) { return json(v).dump(); }

void WriteVector(std::ostringstream& out, const Eigen::VectorXd& v) {
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ", ";
    out << Num(v[i]);
  }
  out << "]";
}

void WriteMatrix(std::ostringstream& out, const Eigen::MatrixXd& m) {
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) nnz += !IsPositiveZero(m(i, k));
  }
  if (m.size() > 0 && 4 * nnz <= m.size()) {
    out << "{\"format\": \"coo\", \"rows\": " << m.rows()
        << ", \"cols\": " << m.cols() << ", \"entries\": [";
    bool first = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        if (IsPositiveZero(m(i, k))) continue;
        out << (first ? "\n    " : ",\n    ") << "[" << i << ", " << k << ", "
            << Num(m(i, k)) << "]";
        first = false;
      }
    }
    out << "]}";
    return;
  }
  out << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ");
    WriteVector(out, m.row(i).transpose());
  }
  out << "]";
}

}  // namespace

absl::StatusOr<ProblemData> ParseProblem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed instance file: ", e.what()));
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("instance file must be a JSON object");
  }
  absl::StatusOr<Eigen::Index> n = ReadCount(doc, "n");
  if (!n.ok()) return n.status();
  absl::StatusOr<Eigen::Index> m1 = ReadCount(doc, "m1");
  if (!m1.ok()) return m1.status();
  absl::StatusOr<Eigen::Index> m2 = ReadCount(doc, "m2");
  if (!m2.ok()) return m2.status();
  if (*n < 1) return FieldError("n", "must be at least 1");

  ProblemData p;
  absl::StatusOr<Eigen::MatrixXd> q = ReadMatrix(doc, "Q", *n, *n);
  if (!q.ok()) return q.status();
  p.q = *std::move(q);
  absl::StatusOr<Eigen::VectorXd> c = ReadVector(doc, "c", *n);
  if (!c.ok()) return c.status();
  p.c = *std::move(c);
  absl::StatusOr<Eigen::MatrixXd> a1 = ReadMatrix(doc, "A1", *m1, *n);
  if (!a1.ok()) return a1.status();
  p.a1 = *std::move(a1);
  absl::StatusOr<Eigen::VectorXd> b1 = ReadVector(doc, "b1", *m1);
  if (!b1.ok()) return b1.status();
  p.b1 = *std::move(b1);
  absl::StatusOr<Eigen::MatrixXd> a2 = ReadMatrix(doc, "A2", *m2, *n);
  if (!a2.ok()) return a2.status();
  p.a2 = *std::move(a2);
  absl::StatusOr<Eigen::VectorXd> b2 = ReadVector(doc, "b2", *m2);
  if (!b2.ok()) return b2.status();
  p.b2 = *std::move(b2);
  return p;
}

std::string SerializeProblem(const ProblemData& p,
                             const std::string& metadata_json) {
  std::ostringstream out;
  out << "{\n  \"n\": " << p.n() << ",\n  \"m1\": " << p.m1()
      << ",\n  \"m2\": " << p.m2() << ",\n  \"Q\": ";
  WriteMatrix(out, p.q);
  out << ",\n  \"c\": ";
  WriteVector(out, p.c);
  out << ",\n  \"A1\": ";
  WriteMatrix(out, p.m1() > 0 ? p.a1 : Eigen::MatrixXd(0, p.n()));
  out << ",\n  \"b1\": ";
  WriteVector(out, p.b1);
  out << ",\n  \"A2\": ";
  WriteMatrix(out, p.m2() > 0 ? p.a2 : Eigen::MatrixXd(0, p.n()));
  out << ",\n  \"b2\": ";
  WriteVector(out, p.b2);
  if (!metadata_json.empty()) out << ",\n  \"metadata\": " << metadata_json;
  out << "\n}\n";
  return out.str();
}

absl::StatusOr<ProblemData> LoadProblem(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ProblemData> p = ParseProblem(buffer.str());
  if (!p.ok()) {
    return absl::Status(p.status().code(),
                        absl::StrCat(path, ": ", p.status().message()));
  }
  return p;
}

absl::Status SaveProblem(const ProblemData& p, const std::string& path,
                         const std::string& metadata_json) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << SerializeProblem(p, metadata_json);
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace hieralm
