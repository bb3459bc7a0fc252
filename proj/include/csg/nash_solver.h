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

#ifndef CSG_NASH_SOLVER_H_
#define CSG_NASH_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csg/chain_analysis.h"
#include "csg/game_model.h"
#include "csg/math_program.h"
#include "csg/programs.h"

namespace csg {

struct SolverConfig {
  int max_outer_iterations = 500;
  int restarts = 32;
  std::uint64_t rng_seed = 0;
  double phi_tolerance = 1e-6;
  // A player keeps its strategy unless the best response improves on it by
  // more than this.
  double br_improvement_tolerance = 1e-9;
  double damping = 0.0;  // in [0, 1)
  int threads = 1;
  // Support-pattern refinement of non-certified candidates.
  bool refine = true;
  // When the restarts certify nothing, every support pattern is tried if the
  // program has at most this many complementary pairs.
  int max_enumerated_pairs = 16;

  // Throws InvalidArgument.
  void Check() const;
};

enum class Verdict { kCertified, kEpsilonOnly, kFailed };

const char* VerdictName(Verdict verdict);

// Certification limits besides the objective tolerance.
inline constexpr double kCertifiedResidual = 1e-8;
inline constexpr double kCertifiedGap = 1e-5;

struct NashCertificate {
  StrategyProfile strategies;
  ProgramKind program = ProgramKind::kMP1;
  // Empty when the strategies are too far from feasible to build one.
  FeasiblePoint point;
  double objective_value = kInf;  // Phi or psi
  double residual_max = kInf;
  std::vector<double> epsilon_gaps;
  // Largest gap, the epsilon of an EpsilonOnly verdict.
  double epsilon = kInf;
  double constraint_violation = kInf;
  CostReport costs;
  Verdict verdict = Verdict::kFailed;
  // Human-readable reasons behind a failed check.
  std::vector<std::string> findings;
  // Search statistics (zero for a plain verification).
  int restart = -1;
  int rounds = 0;
  int certified_restarts = 0;
  bool refined = false;
};

// Checks feasibility and every player's best-response gap at tolerance
// `epsilon`, builds the certificate point and assigns the verdict: Certified
// when the objective is at most `phi_tolerance`, the residuals at most 1e-8
// and the gaps at most 1e-5; EpsilonOnly when only the epsilon checks pass;
// Failed otherwise.
NashCertificate VerifyNash(const Game& game, const StrategyProfile& strategies,
                           double epsilon, double phi_tolerance = 1e-6);

// Multi-start alternating best response. Throws NoFeasibleStart when no
// restart could be started, NotUnichain through validation.
NashCertificate SolveNash(const Game& game, const SolverConfig& config = {});

// Solves the complementarity system of `mp` with the support pattern read
// off `start` (pairs whose row slack is at most `slack_tolerance` are tight,
// the others have a zero variable). Bilinear terms are handled by Newton
// steps. nullopt when the pattern admits no solution.
std::optional<Eigen::VectorXd> SolvePattern(const MathProgram& mp,
                                            const Eigen::VectorXd& start,
                                            double slack_tolerance);

// Same with an explicit pattern, one flag per complementary pair (true:
// tight row, false: zero variable).
std::optional<Eigen::VectorXd> SolveTightPattern(
    const MathProgram& mp, const Eigen::VectorXd& start,
    const std::vector<bool>& pair_tight);

// An exact equilibrium near `strategies` with the same support pattern,
// moved at most `max_shift` in f and the occupation measures. Used to lift
// rounded equilibria to full precision.
std::optional<StrategyProfile> PolishEquilibrium(const Game& game,
                                                 const StrategyProfile& strategies,
                                                 double max_shift = 1e-3);

}  // namespace csg

#endif  // CSG_NASH_SOLVER_H_
