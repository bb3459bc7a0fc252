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

#ifndef CSG_CHAIN_ANALYSIS_H_
#define CSG_CHAIN_ANALYSIS_H_

#include <vector>

#include <Eigen/Dense>

#include "csg/game_model.h"

namespace csg {

struct OccupationMeasure {
  Eigen::VectorXd entries;  // over the chain's flat (s, a) pairs
  Criterion kind;
  Eigen::VectorXd gamma;  // empty for the average kind
};

// Support-graph structure of a row-stochastic matrix.
struct ChainStructure {
  std::vector<std::vector<int>> recurrent_classes;
  std::vector<int> transient_states;

  bool unichain() const { return recurrent_classes.size() == 1; }
};

Eigen::MatrixXd TransitionMatrix(const ControlledChain& chain,
                                 const StationaryStrategy& strategy);
Eigen::MatrixXd TransitionMatrix(const SingleControllerGame& game,
                                 const StationaryStrategy& g);

ChainStructure AnalyzeChain(const Eigen::MatrixXd& P);

// Solves (P^T - I) pi = 0 with sum(pi) = 1. Throws NotUnichain when the
// stationary distribution is not unique.
Eigen::VectorXd SteadyState(const Eigen::MatrixXd& P);

OccupationMeasure AverageOccupation(const ControlledChain& chain,
                                    const StationaryStrategy& strategy);
OccupationMeasure DiscountedOccupation(const ControlledChain& chain,
                                       const StationaryStrategy& strategy,
                                       const Eigen::VectorXd& gamma,
                                       double beta);
// Occupation of player 2 in the single-controller game under its criterion.
OccupationMeasure ControllerOccupation(const SingleControllerGame& game,
                                       const StationaryStrategy& g);

// Max violation of the balance rows (plus the normalization row for the
// average kind) and of nonnegativity.
double MembershipResidual(const ControlledChain& chain,
                          const OccupationMeasure& x);

// Per-state normalization of x; states whose mass is at most
// `zero_mass_tolerance` get the uniform row.
StationaryStrategy RecoverStrategy(const StateActionIndex& index,
                                   const Eigen::VectorXd& x,
                                   double zero_mass_tolerance = 1e-12);

// Cost data seen by one player once all other strategies are fixed, over
// that player's flat pairs. For player 1 of a single-controller game the
// constraint vectors are the subscription tables themselves.
struct MarginalCosts {
  Eigen::VectorXd cost;
  std::vector<Eigen::VectorXd> constraint;
};

MarginalCosts PlayerOneMarginals(const SingleControllerGame& game,
                                 const Eigen::VectorXd& x);
MarginalCosts PlayerTwoMarginals(const SingleControllerGame& game,
                                 const StationaryStrategy& f);
// `occupations[j]` is player j's occupation vector; entry `player` is unused.
MarginalCosts IndependentMarginals(const IndependentGame& game, int player,
                                   const std::vector<Eigen::VectorXd>& occupations);

// `profile[player]` is ignored.
MarginalCosts ComputeMarginalCosts(const Game& game,
                                   const StrategyProfile& profile, int player);

// Sum over the joint space of prod_j x^j(k_j) * tensor(k).
double JointExpectation(const IndependentGame& game, const Eigen::VectorXd& tensor,
                        const std::vector<Eigen::VectorXd>& occupations);

struct CostReport {
  std::vector<double> main_costs;
  std::vector<std::vector<double>> constraint_costs;
  std::vector<std::vector<double>> slacks;  // xi - constraint cost
  std::vector<std::vector<bool>> bounds_satisfied;

  double MaxViolation() const;
};

CostReport ExpectedCosts(const Game& game, const StrategyProfile& profile,
                         double bound_tolerance = 1e-9);

// Occupation vectors of every player that owns one: {x} for single
// controller (player 2 only, player 1 slot empty), {x^1..x^N} otherwise.
std::vector<Eigen::VectorXd> OccupationVectors(const Game& game,
                                               const StrategyProfile& profile);

}  // namespace csg

#endif  // CSG_CHAIN_ANALYSIS_H_
