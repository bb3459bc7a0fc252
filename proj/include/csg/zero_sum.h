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

#ifndef CSG_ZERO_SUM_H_
#define CSG_ZERO_SUM_H_

#include <vector>

#include "csg/game_model.h"
#include "csg/lp.h"
#include "csg/math_program.h"

namespace csg {

// The two linear programs a zero-sum QP1, QP2 or QP3 separates into. With
// c^1 = -c^2 the product terms of the objective cancel and no row couples the
// two variable groups, so each half is an LP; both have the game value
// (player 1's cost) as optimum.
//
//  single controller: `first` over (f, v, u, delta2), minimized, and
//                     `second` over (x, z, delta1), maximized. Subscription
//                     rows stay with f.
//  independent:       `first` over (x1, v2, u2, delta2), minimized, and
//                     `second` over (x2, v1, u1, delta1), maximized.
struct ZeroSumPair {
  LinearProgram first;
  LinearProgram second;
  // Program catalog index of every LP column.
  std::vector<int> first_columns;
  std::vector<int> second_columns;
};

// Largest |c^1 + c^2| over all entries.
double ZeroSumDeviation(const Game& game);

// Throws NotZeroSum when the deviation exceeds 1e-12 and InvalidArgument
// unless `qp` is QP1, QP2 or QP3.
ZeroSumPair ZeroSumSplit(const MathProgram& qp, const Game& game);

// Strategies from optimal solutions of the two halves: player 1's from
// `first`, the other player's from `second`.
StrategyProfile ZeroSumStrategies(const MathProgram& qp, const Game& game,
                                  const ZeroSumPair& pair,
                                  const LpSolution& first,
                                  const LpSolution& second);

}  // namespace csg

#endif  // CSG_ZERO_SUM_H_
