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

#ifndef CSG_MONTE_CARLO_H_
#define CSG_MONTE_CARLO_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csg/chain_analysis.h"
#include "csg/game_model.h"

namespace csg {

struct SimOptions {
  long long burn_in = 0;  // average criterion only
  int batches = 100;      // batch means for the standard errors
  // Discounted episodes stop once beta^T falls below this.
  double discount_tail = 1e-13;
};

// Empirical counterparts of the analytic functionals. Occupations are kept
// for every controlled chain: player 2's chain for a single-controller game,
// each player's chain otherwise.
struct SimReport {
  long long horizon = 0;
  std::uint64_t seed = 0;
  bool discounted = false;
  double beta = 0.0;
  long long episodes = 1;
  long long episode_length = 0;
  // Bound on the discounted tail beyond the episode length.
  double truncation_bound = 0.0;

  std::vector<Eigen::VectorXd> empirical_occupation;
  std::vector<Eigen::VectorXd> occupation_errors;
  std::vector<double> empirical_costs;
  std::vector<double> cost_errors;
  // Time-average constraint functionals; player 1's subscription rows of a
  // single-controller game are not reported.
  std::vector<std::vector<double>> empirical_constraint_costs;
  std::vector<std::vector<double>> constraint_errors;
};

// Average criterion: one trajectory of `horizon` steps after the burn-in.
// Discounted: episodes of length T with beta^T <= discount_tail, as many as
// fit in `horizon` steps, each weighted by (1 - beta) beta^t.
SimReport Simulate(const Game& game, const StrategyProfile& strategies,
                   long long horizon, std::uint64_t seed,
                   const SimOptions& options = {});

struct Comparison {
  std::string quantity;
  double empirical = 0.0;
  double analytic = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

struct CompareReport {
  std::vector<Comparison> items;
  bool all_pass() const;
};

// Flags quantities off by more than z standard errors. Zero standard error
// demands equality up to rounding. `occupations` follows the SimReport
// layout. Throws ShapeMismatch.
CompareReport Compare(const SimReport& sim, const CostReport& analytic,
                      const std::vector<Eigen::VectorXd>& occupations,
                      double z);

// Analytic occupations in the SimReport layout.
std::vector<Eigen::VectorXd> AnalyticOccupations(const Game& game,
                                                 const StrategyProfile& profile);

// Schema-versioned JSON, kind "sim_report".
std::string SerializeSimReport(const SimReport& report);
SimReport ParseSimReport(const std::string& text);

}  // namespace csg

#endif  // CSG_MONTE_CARLO_H_
