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

#ifndef CSG_BEST_RESPONSE_H_
#define CSG_BEST_RESPONSE_H_

#include <limits>

#include <Eigen/Dense>

#include "csg/chain_analysis.h"
#include "csg/game_model.h"
#include "csg/lp.h"

namespace csg {

// Primal layouts:
//   player 1:      f(s,a1) >= 0; rows sub(k) <=, then simplex(s) =.
//   occupation:    x(s,a) >= 0; rows balance(s') =, norm = (average only),
//                  then constraint rows <=.
// Dual layouts (all maximizations):
//   player 1:      z(s) free, delta(k) >= 0; one <= row per (s,a1).
//   average:       v free, u(s) free, delta(l) >= 0; one <= row per (s,a).
//   discounted:    u(s) free, delta(l) >= 0; one <= row per (s,a).
LinearProgram BuildP1Lp(const SingleControllerGame& game,
                        const StationaryStrategy& g);
LinearProgram BuildP1Dual(const SingleControllerGame& game,
                          const StationaryStrategy& g);
LinearProgram BuildP2Lp(const SingleControllerGame& game,
                        const StationaryStrategy& f);
LinearProgram BuildP2Dual(const SingleControllerGame& game,
                          const StationaryStrategy& f);
// `profile[player]` is ignored.
LinearProgram BuildIndepLp(const IndependentGame& game, int player,
                           const StrategyProfile& profile);
LinearProgram BuildIndepDual(const IndependentGame& game, int player,
                             const StrategyProfile& profile);

// Same builders from precomputed marginal costs.
LinearProgram BuildP1LpFromMarginals(const SingleControllerGame& game,
                                     const MarginalCosts& m);
LinearProgram BuildP1DualFromMarginals(const SingleControllerGame& game,
                                       const MarginalCosts& m);
LinearProgram BuildOccupationLp(const ControlledChain& chain,
                                const Criterion& criterion,
                                const MarginalCosts& m,
                                const Eigen::VectorXd& xi);
LinearProgram BuildOccupationDual(const ControlledChain& chain,
                                  const Criterion& criterion,
                                  const MarginalCosts& m,
                                  const Eigen::VectorXd& xi);

// Dual multipliers named as in the program catalogs. `v` is NaN
// when the program has none (discounted player 2); `u` is empty for player 1
// and `z` empty for occupation players.
struct DualVariables {
  double v = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd u;
  Eigen::VectorXd z;
  Eigen::VectorXd delta;
};

struct BestResponseResult {
  StationaryStrategy strategy;
  double value = 0.0;
  // f for player 1 of a single-controller game, the occupation x otherwise.
  Eigen::VectorXd own_vector;
  LinearProgram primal_lp;
  LinearProgram dual_lp;
  LpSolution primal;
  LpSolution dual;
  DualVariables dual_vars;
};

// Solves the primal and the explicit dual and checks that their values agree
// within 1e-7. Throws InfeasibleSubscription (player 1) or Infeasible.
BestResponseResult BestResponse(const Game& game, int player,
                                const StrategyProfile& profile);

// Same, from marginal costs already computed for `player`.
BestResponseResult BestResponseFromMarginals(const Game& game, int player,
                                             const MarginalCosts& m);

// Duals of the primal read in the dual program's variables; used to
// cross-check the two routes.
DualVariables DualsFromPrimal(const Game& game, int player,
                              const LpSolution& primal);

}  // namespace csg

#endif  // CSG_BEST_RESPONSE_H_
