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

#ifndef CSG_PROGRAMS_H_
#define CSG_PROGRAMS_H_

#include <string>

#include <Eigen/Dense>

#include "csg/game_model.h"
#include "csg/math_program.h"

namespace csg {

// Catalogs:
//   single controller: v, u(s), z(s), f(s,a1), x(s,a2), delta1(k), delta2(l)
//                      (no v for the discounted programs);
//   independent:       v1, u1(s), v2, u2(s), ..., x1(s,a), x2(s,a), ...,
//                      delta1(k), delta2(k), ...
// Family labels follow the roman numbering of each program.
MathProgram AssembleMp1(const SingleControllerGame& game);
MathProgram AssembleMp2(const SingleControllerGame& game);
MathProgram AssembleMp3(const IndependentGame& game);
// beta in [0, 1]; beta = 1 is the average program.
MathProgram AssembleMp4(const SingleControllerGame& game, double beta);

// MP4 at beta = 1 is MP1 as it stands. Below 1 family (iv) and variable v
// are dropped and the later families renumbered, which yields MP2.
MathProgram SpecializeMp4(const MathProgram& mp4, double beta);
// Label map from MP4 numbering to MP2 numbering once (iv) is gone.
std::map<std::string, std::string> Mp4ToMp2Labels();

// MP1, MP2 or MP3 according to the game and its criterion.
MathProgram AssembleForGame(const Game& game);

// Largest deviation of the constraint tensors from their decoupled form
// (player 2 tables constant in a1, or each d^{i,k} a function of its own
// pair). `where` describes the worst entry.
double DecouplingDeviation(const Game& game, std::string* where = nullptr);

// MP1/MP2/MP3 -> QP1/QP2/QP3. Throws NotDecoupled when the deviation exceeds
// 1e-12.
MathProgram SpecializeQp(const MathProgram& mp, const Game& game);

struct FeasiblePoint {
  Eigen::VectorXd values;
  std::vector<FamilyResidual> residuals;
};

// Occupation measures of the strategies plus optimal duals of each player's
// best-response program. Throws InfeasibleStrategies when a constraint
// functional exceeds its bound by more than `tolerance`.
FeasiblePoint MakeFeasiblePoint(const MathProgram& mp, const Game& game,
                                const StrategyProfile& profile,
                                double tolerance = 1e-8);

// f (normalized) and the strategies recovered from the x blocks.
StrategyProfile StrategiesFromPoint(const MathProgram& mp, const Game& game,
                                    const Eigen::VectorXd& point);

// Entries of one block for one player, in catalog order.
Eigen::VectorXd BlockValues(const MathProgram& mp, const Eigen::VectorXd& point,
                            const std::string& block, int player);

// Point assembled from named values; variables missing from `values` are 0.
Eigen::VectorXd PointFromNames(const MathProgram& mp,
                               const std::map<std::string, double>& values);

}  // namespace csg

#endif  // CSG_PROGRAMS_H_
