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

#ifndef CSG_MATH_PROGRAM_H_
#define CSG_MATH_PROGRAM_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csg/lp.h"

namespace csg {

enum class ProgramKind { kMP1, kMP2, kMP3, kMP4, kQP1, kQP2, kQP3 };

const char* ProgramKindName(ProgramKind kind);
bool IsQuadraticKind(ProgramKind kind);

// coefficient * prod(vars); an empty variable list is a constant.
struct Term {
  double coefficient = 0.0;
  std::vector<int> vars;
};

struct Polynomial {
  std::vector<Term> terms;

  void Add(double coefficient, std::vector<int> vars);
  double Evaluate(const Eigen::VectorXd& point) const;
  int Degree() const;
  // Sorted indices, merged duplicates, zero terms dropped, terms ordered.
  Polynomial Canonical() const;
};

struct ProgramVariable {
  std::string name;
  // "v", "u", "z", "f", "x", "delta1", "delta2" or "delta".
  std::string block;
  int player = 0;  // owning player, 0-based
};

// lhs (relation) rhs with all variable terms on the left.
struct ProgramRow {
  Polynomial lhs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string family;  // roman label such as "(iii)"
  std::string name;
};

struct FamilyResidual {
  std::string family;
  double residual = 0.0;
};

class MathProgram {
 public:
  ProgramKind kind = ProgramKind::kMP1;
  std::vector<ProgramVariable> variables;
  Polynomial objective;
  std::vector<ProgramRow> rows;
  // Labels in presentation order.
  std::vector<std::string> families;
  // (variable, row) pairs whose product sums to the objective on points that
  // satisfy every equality family.
  std::vector<std::pair<int, int>> complementary;

  int num_variables() const { return static_cast<int>(variables.size()); }
  int AddVariable(const std::string& name, const std::string& block,
                  int player);
  // -1 when absent.
  int Find(const std::string& name) const;
  int AddRow(Polynomial lhs, Relation relation, double rhs,
             const std::string& family, const std::string& name);

  int ObjectiveDegree() const { return objective.Degree(); }
  int ConstraintDegree() const;
  std::vector<int> RowsOf(const std::string& family) const;
};

// Throws DimensionMismatch unless point has one entry per variable.
double EvaluateObjective(const MathProgram& mp, const Eigen::VectorXd& point);
// Positive part for inequalities, absolute residual for equalities.
double RowViolation(const ProgramRow& row, const Eigen::VectorXd& point);
std::vector<FamilyResidual> FeasibilityResiduals(const MathProgram& mp,
                                                 const Eigen::VectorXd& point);
double MaxResidual(const std::vector<FamilyResidual>& residuals);

// Removes every row of `family`, then relabels the remaining families.
void RemoveFamily(MathProgram& mp, const std::string& family,
                  const std::map<std::string, std::string>& relabel);
// Substitutes a fixed value for the variable and drops it from the catalog.
void EliminateVariable(MathProgram& mp, const std::string& name, double value);

// Structural equality after aligning variables by name: same catalogs, same
// canonical objective, and the same multiset of canonical rows with family
// labels compared after `label_map` is applied to `b`. On mismatch, `why`
// receives a short description.
bool StructurallyEqual(const MathProgram& a, const MathProgram& b,
                       const std::map<std::string, std::string>& label_map = {},
                       std::string* why = nullptr);

// Rows whose lhs is linear, as a LinearProgram over all catalog variables
// with free bounds. Throws InvalidArgument if `rows` contains a nonlinear row.
LinearProgram LinearRows(const MathProgram& mp, const std::vector<int>& rows);

}  // namespace csg

#endif  // CSG_MATH_PROGRAM_H_
