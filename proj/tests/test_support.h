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


// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's LP solver and linear-system routines.

#ifndef CSG_TESTS_TEST_SUPPORT_H_
#define CSG_TESTS_TEST_SUPPORT_H_

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csg/game_model.h"
#include "csg/lp.h"
#include "csg/random.h"

namespace csg::testing {

// Four-decimal reference equilibria of the built-in games.
StrategyProfile ReferenceEquilibrium(const std::string& name,
                                     double alpha = 0.5);

inline constexpr double kReferenceTolerance = 1e-3;

// Rows given as nested lists; gamma defaults to uniform.
ControlledChain MakeChain(
    const std::vector<std::vector<std::vector<double>>>& trans,
    std::vector<double> gamma = {});

// Random chain with every transition row drawn from Dirichlet(1,...,1).
ControlledChain RandomChain(Rng& rng, int states, int actions);

// Random single-controller game with integer costs in [0, 9], decoupled
// player 2 constraints and bounds placed strictly between the smallest and
// the uniform-strategy value of each functional.
SingleControllerGame RandomScGame(Rng& rng, int states, int actions, int n1,
                                  int n2, Criterion criterion);

// Same with d2 genuinely depending on a1.
SingleControllerGame CoupledScGame();

// Two players, one state each; player i picks rows (i = 0) or columns.
SingleControllerGame MatrixGame(const Eigen::MatrixXd& cost1,
                                const Eigen::MatrixXd& cost2);

// Returns `game` with cost2 replaced by -cost1 (or c2 = -c1).
Game ZeroSumVariant(const Game& game);

// Vertex enumeration: every square subsystem of the active rows and finite
// bounds is solved, infeasible points are dropped and the best objective is
// kept. Unbounded problems are recognized by comparing two box sizes.
struct OracleResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
};
OracleResult VertexEnumeration(const LinearProgram& lp);

// Random LP with 1..6 variables, 1..8 rows and integer data in [-5, 5];
// bounds are mostly [0, inf) with some free and some boxed columns.
LinearProgram RandomSmallLp(Rng& rng);

// P(g) built entry by entry.
Eigen::MatrixXd TransitionOracle(const ControlledChain& chain,
                                 const StationaryStrategy& strategy);

// Stationary distribution by power iteration on the lazy chain (I + P) / 2.
Eigen::VectorXd PowerIterationStationary(const Eigen::MatrixXd& P);

// (1 - beta) sum_{t <= terms} beta^t gamma^T P^t.
Eigen::VectorXd SeriesDiscounted(const Eigen::MatrixXd& P,
                                 const Eigen::VectorXd& gamma, double beta,
                                 int terms);

// Occupation measure through the two oracles above.
Eigen::VectorXd OccupationOracle(const ControlledChain& chain,
                                 const StationaryStrategy& strategy,
                                 const Criterion& criterion,
                                 const Eigen::VectorXd& gamma);

// Optimal cost of the unconstrained MDP with per-pair cost `cost` by policy
// iteration (average: gain of the unichain relative-value equations;
// discounted: (1 - beta) gamma . v).
double PolicyIteration(const ControlledChain& chain, const Criterion& criterion,
                       const Eigen::VectorXd& cost);

// Every deterministic strategy of `index`.
std::vector<StationaryStrategy> DeterministicStrategies(
    const StateActionIndex& index);

// min cost . w over the convex hull of `vertices` subject to at most one
// linear constraint constraint . w <= xi. With one constraint the optimum is
// attained on a segment between two vertices, so pairs are enumerated.
// nullopt when no mixture is feasible.
std::optional<double> MixtureOracle(const std::vector<Eigen::VectorXd>& vertices,
                                    const Eigen::VectorXd& cost,
                                    const std::vector<Eigen::VectorXd>& constraint,
                                    const Eigen::VectorXd& xi);

// Value min_p max_q p^T A q of a matrix game with two rows.
double TwoRowMatrixGameValue(const Eigen::MatrixXd& A);

// A feasible random profile: each player's draw is mixed, in its own
// f or occupation coordinates, with its best response to the current profile
// as far as its constraints allow. nullopt if the result is still
// infeasible (possible only when constraints couple the players).
std::optional<StrategyProfile> FeasibleRandomProfile(const Game& game,
                                                     Rng& rng);

// Seconds elapsed while running `fn`.
template <typename Fn>
double TimeIt(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace csg::testing

#endif  // CSG_TESTS_TEST_SUPPORT_H_
