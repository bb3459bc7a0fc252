// Copyright 2026 The csgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csg/math_program.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "csg/error.h"

namespace csg {

const char* ProgramKindName(ProgramKind kind) {
  switch (kind) {
    case ProgramKind::kMP1:
      return "MP1";
    case ProgramKind::kMP2:
      return "MP2";
    case ProgramKind::kMP3:
      return "MP3";
    case ProgramKind::kMP4:
      return "MP4";
    case ProgramKind::kQP1:
      return "QP1";
    case ProgramKind::kQP2:
      return "QP2";
    case ProgramKind::kQP3:
      return "QP3";
  }
  return "?";
}

bool IsQuadraticKind(ProgramKind kind) {
  return kind == ProgramKind::kQP1 || kind == ProgramKind::kQP2 ||
         kind == ProgramKind::kQP3;
}

void Polynomial::Add(double coefficient, std::vector<int> vars) {
  if (coefficient != 0.0) terms.push_back({coefficient, std::move(vars)});
}

double Polynomial::Evaluate(const Eigen::VectorXd& point) const {
  double total = 0.0;
  for (const Term& t : terms) {
    double product = t.coefficient;
    for (int v : t.vars) product *= point(v);
    total += product;
  }
  return total;
}

int Polynomial::Degree() const {
  int degree = 0;
  for (const Term& t : terms) {
    degree = std::max(degree, static_cast<int>(t.vars.size()));
  }
  return degree;
}

Polynomial Polynomial::Canonical() const {
  std::vector<Term> sorted = terms;
  for (Term& t : sorted) std::sort(t.vars.begin(), t.vars.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Term& a, const Term& b) { return a.vars < b.vars; });
  Polynomial out;
  for (const Term& t : sorted) {
    if (!out.terms.empty() && out.terms.back().vars == t.vars) {
      out.terms.back().coefficient += t.coefficient;
    } else {
      out.terms.push_back(t);
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coefficient == 0.0; });
  return out;
}

int MathProgram::AddVariable(const std::string& name, const std::string& block,
                             int player) {
  variables.push_back({name, block, player});
  return num_variables() - 1;
}

int MathProgram::Find(const std::string& name) const {
  for (int i = 0; i < num_variables(); ++i) {
    if (variables[i].name == name) return i;
  }
  return -1;
}

int MathProgram::AddRow(Polynomial lhs, Relation relation, double rhs,
                        const std::string& family, const std::string& name) {
  rows.push_back({std::move(lhs), relation, rhs, family, name});
  if (std::find(families.begin(), families.end(), family) == families.end()) {
    families.push_back(family);
  }
  return static_cast<int>(rows.size()) - 1;
}

int MathProgram::ConstraintDegree() const {
  int degree = 0;
  for (const ProgramRow& row : rows) degree = std::max(degree, row.lhs.Degree());
  return degree;
}

std::vector<int> MathProgram::RowsOf(const std::string& family) const {
  std::vector<int> out;
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].family == family) out.push_back(static_cast<int>(r));
  }
  return out;
}

namespace {

void CheckPoint(const MathProgram& mp, const Eigen::VectorXd& point) {
  if (point.size() != mp.num_variables()) {
    std::ostringstream msg;
    msg << "point has " << point.size() << " entries, program has "
        << mp.num_variables() << " variables";
    Fail(ErrorCode::kDimensionMismatch, msg.str());
  }
}

}  // namespace

double EvaluateObjective(const MathProgram& mp, const Eigen::VectorXd& point) {
  CheckPoint(mp, point);
  return mp.objective.Evaluate(point);
}

double RowViolation(const ProgramRow& row, const Eigen::VectorXd& point) {
  const double lhs = row.lhs.Evaluate(point);
  switch (row.relation) {
    case Relation::kLessEqual:
      return std::max(0.0, lhs - row.rhs);
    case Relation::kGreaterEqual:
      return std::max(0.0, row.rhs - lhs);
    case Relation::kEqual:
      return std::abs(lhs - row.rhs);
  }
  return 0.0;
}

std::vector<FamilyResidual> FeasibilityResiduals(const MathProgram& mp,
                                                 const Eigen::VectorXd& point) {
  CheckPoint(mp, point);
  std::vector<FamilyResidual> out;
  for (const std::string& family : mp.families) out.push_back({family, 0.0});
  for (const ProgramRow& row : mp.rows) {
    for (FamilyResidual& fr : out) {
      if (fr.family == row.family) {
        fr.residual = std::max(fr.residual, RowViolation(row, point));
      }
    }
  }
  return out;
}

double MaxResidual(const std::vector<FamilyResidual>& residuals) {
  double worst = 0.0;
  for (const FamilyResidual& r : residuals) worst = std::max(worst, r.residual);
  return worst;
}

void RemoveFamily(MathProgram& mp, const std::string& family,
                  const std::map<std::string, std::string>& relabel) {
  std::vector<int> new_index(mp.rows.size(), -1);
  std::vector<ProgramRow> kept;
  for (size_t r = 0; r < mp.rows.size(); ++r) {
    if (mp.rows[r].family == family) continue;
    new_index[r] = static_cast<int>(kept.size());
    kept.push_back(mp.rows[r]);
  }
  mp.rows = std::move(kept);
  std::vector<std::pair<int, int>> pairs;
  for (auto [var, row] : mp.complementary) {
    if (new_index[row] >= 0) pairs.push_back({var, new_index[row]});
  }
  mp.complementary = std::move(pairs);
  std::erase(mp.families, family);
  auto map_label = [&](const std::string& label) {
    auto it = relabel.find(label);
    return it == relabel.end() ? label : it->second;
  };
  for (ProgramRow& row : mp.rows) row.family = map_label(row.family);
  for (std::string& label : mp.families) label = map_label(label);
}

namespace {

void Substitute(Polynomial& poly, int var, double value) {
  Polynomial out;
  for (const Term& t : poly.terms) {
    Term next{t.coefficient, {}};
    for (int v : t.vars) {
      if (v == var) {
        next.coefficient *= value;
      } else {
        next.vars.push_back(v > var ? v - 1 : v);
      }
    }
    if (next.coefficient != 0.0) out.terms.push_back(std::move(next));
  }
  poly = std::move(out);
}

}  // namespace

void EliminateVariable(MathProgram& mp, const std::string& name, double value) {
  const int var = mp.Find(name);
  if (var < 0) Fail(ErrorCode::kInvalidArgument, "no variable '" + name + "'");
  Substitute(mp.objective, var, value);
  for (ProgramRow& row : mp.rows) {
    Substitute(row.lhs, var, value);
    std::vector<Term> kept;
    for (Term& t : row.lhs.terms) {
      if (t.vars.empty()) {
        row.rhs -= t.coefficient;
      } else {
        kept.push_back(std::move(t));
      }
    }
    row.lhs.terms = std::move(kept);
  }
  std::vector<std::pair<int, int>> pairs;
  for (auto [v, row] : mp.complementary) {
    if (v != var) pairs.push_back({v > var ? v - 1 : v, row});
  }
  mp.complementary = std::move(pairs);
  mp.variables.erase(mp.variables.begin() + var);
}

namespace {

struct CanonicalRow {
  std::string family;
  int relation;
  double rhs;
  std::vector<std::pair<std::vector<int>, double>> terms;

  auto Key() const { return std::tie(family, relation, rhs, terms); }
  bool operator<(const CanonicalRow& o) const { return Key() < o.Key(); }
  bool operator==(const CanonicalRow& o) const { return Key() == o.Key(); }
};

std::vector<std::pair<std::vector<int>, double>> Flatten(
    const Polynomial& poly, const std::vector<int>& remap) {
  Polynomial mapped;
  for (const Term& t : poly.terms) {
    Term next{t.coefficient, {}};
    for (int v : t.vars) next.vars.push_back(remap[v]);
    mapped.terms.push_back(std::move(next));
  }
  std::vector<std::pair<std::vector<int>, double>> out;
  for (const Term& t : mapped.Canonical().terms) {
    out.push_back({t.vars, t.coefficient});
  }
  return out;
}

std::vector<CanonicalRow> CanonicalRows(
    const MathProgram& mp, const std::vector<int>& remap,
    const std::map<std::string, std::string>& label_map) {
  std::vector<CanonicalRow> out;
  for (const ProgramRow& row : mp.rows) {
    auto it = label_map.find(row.family);
    out.push_back({it == label_map.end() ? row.family : it->second,
                   static_cast<int>(row.relation), row.rhs,
                   Flatten(row.lhs, remap)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool StructurallyEqual(const MathProgram& a, const MathProgram& b,
                       const std::map<std::string, std::string>& label_map,
                       std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (a.num_variables() != b.num_variables()) {
    return fail("variable counts differ");
  }
  std::vector<int> identity(a.num_variables());
  std::vector<int> remap(b.num_variables());
  for (int i = 0; i < a.num_variables(); ++i) identity[i] = i;
  for (int i = 0; i < b.num_variables(); ++i) {
    remap[i] = a.Find(b.variables[i].name);
    if (remap[i] < 0) return fail("variable " + b.variables[i].name + " unmatched");
  }
  if (Flatten(a.objective, identity) != Flatten(b.objective, remap)) {
    return fail("objective terms differ");
  }
  const auto rows_a = CanonicalRows(a, identity, {});
  const auto rows_b = CanonicalRows(b, remap, label_map);
  if (rows_a.size() != rows_b.size()) return fail("row counts differ");
  for (size_t r = 0; r < rows_a.size(); ++r) {
    if (!(rows_a[r] == rows_b[r])) {
      return fail("row multisets differ in family " + rows_a[r].family);
    }
  }
  return true;
}

LinearProgram LinearRows(const MathProgram& mp, const std::vector<int>& rows) {
  LinearProgram lp;
  for (const ProgramVariable& v : mp.variables) lp.AddVariable(v.name, 0.0, -kInf, kInf);
  for (int r : rows) {
    const ProgramRow& row = mp.rows.at(r);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(mp.num_variables());
    double rhs = row.rhs;
    for (const Term& t : row.lhs.terms) {
      if (t.vars.empty()) {
        rhs -= t.coefficient;
      } else if (t.vars.size() == 1) {
        a(t.vars[0]) += t.coefficient;
      } else {
        Fail(ErrorCode::kInvalidArgument, "row " + row.name + " is not linear");
      }
    }
    lp.AddConstraint(std::move(a), row.relation, rhs, row.name);
  }
  return lp;
}

}  // namespace csg
