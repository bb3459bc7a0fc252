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

#include "csg/zero_sum.h"

#include <cmath>
#include <sstream>

#include "csg/chain_analysis.h"
#include "csg/error.h"
#include "csg/programs.h"

namespace csg {
namespace {

constexpr double kZeroSumTolerance = 1e-12;

bool InFirstGroup(const ProgramVariable& v, bool single_controller) {
  if (single_controller) {
    return v.block == "f" || v.block == "v" || v.block == "u" ||
           v.block == "delta2";
  }
  return v.block == "x" ? v.player == 0 : v.player == 1;
}

LinearProgram BuildHalf(const MathProgram& qp, const std::vector<int>& group,
                        const std::vector<int>& column_of, Sense sense) {
  LinearProgram lp;
  lp.sense = sense;
  const double sign = sense == Sense::kMinimize ? 1.0 : -1.0;
  for (int v : group) lp.AddVariable(qp.variables[v].name, 0.0, -kInf, kInf);
  for (const Term& t : qp.objective.Canonical().terms) {
    if (t.vars.size() == 1 && column_of[t.vars[0]] >= 0) {
      lp.objective(column_of[t.vars[0]]) += sign * t.coefficient;
    }
  }
  const int n = static_cast<int>(group.size());
  for (const ProgramRow& row : qp.rows) {
    const Polynomial c = row.lhs.Canonical();
    bool mine = false;
    for (const Term& t : c.terms) {
      if (!t.vars.empty() && column_of[t.vars[0]] >= 0) mine = true;
    }
    if (!mine) continue;
    if (row.relation == Relation::kGreaterEqual && row.rhs == 0.0 &&
        c.terms.size() == 1 && c.terms[0].coefficient > 0.0) {
      lp.lower(column_of[c.terms[0].vars[0]]) = 0.0;
      continue;
    }
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    double rhs = row.rhs;
    for (const Term& t : c.terms) {
      if (t.vars.empty()) {
        rhs -= t.coefficient;
        continue;
      }
      if (t.vars.size() != 1 || column_of[t.vars[0]] < 0) {
        Fail(ErrorCode::kInvalidArgument,
             "row " + row.name + " couples the two halves");
      }
      a(column_of[t.vars[0]]) += t.coefficient;
    }
    lp.AddConstraint(std::move(a), row.relation, rhs, row.name);
  }
  return lp;
}

}  // namespace

double ZeroSumDeviation(const Game& game) {
  double worst = 0.0;
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    for (int s = 0; s < sc->num_states(); ++s) {
      worst = std::max(worst, (sc->cost1[s] + sc->cost2[s]).cwiseAbs().maxCoeff());
    }
    return worst;
  }
  const auto& g = std::get<IndependentGame>(game);
  if (g.num_players() != 2) return kInf;
  return (g.cost[0] + g.cost[1]).cwiseAbs().maxCoeff();
}

ZeroSumPair ZeroSumSplit(const MathProgram& qp, const Game& game) {
  if (!IsQuadraticKind(qp.kind)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("zero-sum split needs QP1, QP2 or QP3, got ") +
             ProgramKindName(qp.kind));
  }
  const bool sc = std::holds_alternative<SingleControllerGame>(game);
  if (sc == (qp.kind == ProgramKind::kQP3)) {
    Fail(ErrorCode::kInvalidArgument, "program does not match the game kind");
  }
  const double deviation = ZeroSumDeviation(game);
  if (deviation > kZeroSumTolerance) {
    std::ostringstream msg;
    msg << "costs are not zero-sum (max |c1 + c2| = " << deviation << ")";
    Fail(ErrorCode::kNotZeroSum, msg.str());
  }
  ZeroSumPair pair;
  std::vector<int> first_of(qp.num_variables(), -1);
  std::vector<int> second_of(qp.num_variables(), -1);
  for (int v = 0; v < qp.num_variables(); ++v) {
    if (InFirstGroup(qp.variables[v], sc)) {
      first_of[v] = static_cast<int>(pair.first_columns.size());
      pair.first_columns.push_back(v);
    } else {
      second_of[v] = static_cast<int>(pair.second_columns.size());
      pair.second_columns.push_back(v);
    }
  }
  pair.first = BuildHalf(qp, pair.first_columns, first_of, Sense::kMinimize);
  pair.second = BuildHalf(qp, pair.second_columns, second_of, Sense::kMaximize);
  return pair;
}

StrategyProfile ZeroSumStrategies(const MathProgram& qp, const Game& game,
                                  const ZeroSumPair& pair,
                                  const LpSolution& first,
                                  const LpSolution& second) {
  if (first.status != LpStatus::kOptimal || second.status != LpStatus::kOptimal) {
    Fail(ErrorCode::kInfeasible, "zero-sum halves are not both optimal");
  }
  Eigen::VectorXd point = Eigen::VectorXd::Zero(qp.num_variables());
  for (size_t c = 0; c < pair.first_columns.size(); ++c) {
    point(pair.first_columns[c]) = first.primal(c);
  }
  for (size_t c = 0; c < pair.second_columns.size(); ++c) {
    point(pair.second_columns[c]) = second.primal(c);
  }
  return StrategiesFromPoint(qp, game, point);
}

}  // namespace csg
