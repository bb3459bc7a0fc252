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

#ifndef CSG_GRID_ORACLE_H_
#define CSG_GRID_ORACLE_H_

#include <vector>

#include <Eigen/Dense>

#include "csg/game_model.h"

namespace csg {

struct GridLimits {
  long long max_grid_points = 10'000'000;  // summed over players
  long long max_lp_solves = 200'000;
  long long max_profiles = 100'000'000;
  int max_reported = 1000;
};

struct GridResult {
  int denominator = 0;
  // Smallest max-over-players best-response gap among feasible profiles.
  double min_gap = 0.0;
  // Feasible profiles attaining it (within 1e-12), at most max_reported.
  std::vector<StrategyProfile> profiles;
  bool truncated = false;
  long long profiles_checked = 0;
  long long feasible_profiles = 0;
};

// All points of the simplex in `dimension` coordinates whose entries are
// multiples of 1/denominator.
std::vector<Eigen::VectorXd> SimplexGrid(int dimension, int denominator);

// Enumerates every profile of grid strategies (every state row on the
// 1/denominator simplex grid) of a two-player game and reports those with
// the smallest best-response gap, gaps being measured against exact LP best
// responses. Throws GridTooLarge beyond `limits`.
GridResult GridOracle(const Game& game, int denominator,
                      const GridLimits& limits = {});

}  // namespace csg

#endif  // CSG_GRID_ORACLE_H_
