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

#include "csg/grid_oracle.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "csg/best_response.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"

namespace csg {
namespace {

constexpr double kFeasibility = 1e-9;
constexpr double kTie = 1e-12;

void Compositions(int dimension, int remaining, Eigen::VectorXd& current,
                  int at, int denominator, std::vector<Eigen::VectorXd>& out) {
  if (at == dimension - 1) {
    current(at) = static_cast<double>(remaining) / denominator;
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current(at) = static_cast<double>(k) / denominator;
    Compositions(dimension, remaining - k, current, at + 1, denominator, out);
  }
}

long long Binomial(int n, int k) {
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<long long>(std::llround(r));
}

long long GridSize(const StateActionIndex& index, int denominator) {
  long double total = 1;
  for (int s = 0; s < index.num_states(); ++s) {
    total *= Binomial(denominator + index.num_actions(s) - 1,
                      index.num_actions(s) - 1);
  }
  return total > 9e18L ? std::numeric_limits<long long>::max()
                       : static_cast<long long>(total);
}

std::vector<StationaryStrategy> StrategyGrid(const StateActionIndex& index,
                                             int denominator) {
  std::vector<std::vector<Eigen::VectorXd>> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    rows.push_back(SimplexGrid(index.num_actions(s), denominator));
  }
  std::vector<StationaryStrategy> out;
  std::vector<size_t> digit(rows.size(), 0);
  while (true) {
    std::vector<Eigen::VectorXd> r;
    for (size_t s = 0; s < rows.size(); ++s) r.push_back(rows[s][digit[s]]);
    out.emplace_back(std::move(r));
    size_t s = 0;
    while (s < digit.size() && ++digit[s] == rows[s].size()) digit[s++] = 0;
    if (s == digit.size()) break;
  }
  return out;
}

// A player's decision vector as it enters the bilinear forms below: f for
// player 1 of a single-controller game, the occupation measure otherwise.
Eigen::VectorXd OwnVector(const Game& game, int player,
                          const StationaryStrategy& s) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return player == 0 ? s.Flat() : ControllerOccupation(*sc, s).entries;
  }
  const auto& g = std::get<IndependentGame>(game);
  return AverageOccupation(g.chains[player], s).entries;
}

// Costs and constraint functionals as w1^T M w2.
struct BilinearForms {
  std::vector<Eigen::MatrixXd> cost;  // per player
  struct Constraint {
    int player;
    Eigen::MatrixXd matrix;
    double bound;
  };
  std::vector<Constraint> constraints;
  // Player 1's subscription rows of a single-controller game, linear in w1.
  std::vector<std::pair<Eigen::VectorXd, double>> linear1;
};

BilinearForms Forms(const Game& game) {
  BilinearForms forms;
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    const StateActionIndex& k1 = sc->index1;
    const StateActionIndex& k2 = sc->index2();
    auto block = [&](auto get) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k1.size(), k2.size());
      for (int s = 0; s < sc->num_states(); ++s) {
        m.block(k1.offset(s), k2.offset(s), k1.num_actions(s),
                k2.num_actions(s)) = get(s);
      }
      return m;
    };
    forms.cost.push_back(block([&](int s) { return sc->cost1[s]; }));
    forms.cost.push_back(block([&](int s) { return sc->cost2[s]; }));
    for (int l = 0; l < sc->n2(); ++l) {
      forms.constraints.push_back(
          {1, block([&](int s) { return sc->d2[l][s]; }), sc->xi2(l)});
    }
    for (int k = 0; k < sc->n1(); ++k) {
      forms.linear1.push_back({sc->d1_sub[k], sc->xi1(k)});
    }
    return forms;
  }
  const auto& g = std::get<IndependentGame>(game);
  const int n1 = g.chains[0].index.size();
  const int n2 = g.chains[1].index.size();
  // Player 0 is the most significant joint digit.
  auto reshape = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd m(n1, n2);
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n2; ++b) m(a, b) = v(a * n2 + b);
    }
    return m;
  };
  for (int i = 0; i < 2; ++i) forms.cost.push_back(reshape(g.cost[i]));
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < g.num_constraints(i); ++k) {
      forms.constraints.push_back({i, reshape(g.d[i][k]), g.xi[i](k)});
    }
  }
  return forms;
}

// Exact best-response value of `player` against the opponent's vector.
double BestValue(const Game& game, int player, const Eigen::VectorXd& other,
                 const StationaryStrategy& other_strategy) {
  try {
    if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
      const MarginalCosts m = player == 0
                                  ? PlayerOneMarginals(*sc, other)
                                  : PlayerTwoMarginals(*sc, other_strategy);
      return BestResponseFromMarginals(game, player, m).value;
    }
    const auto& g = std::get<IndependentGame>(game);
    std::vector<Eigen::VectorXd> occ(2);
    occ[1 - player] = other;
    return BestResponseFromMarginals(game, player,
                                     IndependentMarginals(g, player, occ))
        .value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInfeasible ||
        e.code() == ErrorCode::kInfeasibleSubscription) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    throw;
  }
}

}  // namespace

std::vector<Eigen::VectorXd> SimplexGrid(int dimension, int denominator) {
  if (dimension < 1 || denominator < 1) {
    Fail(ErrorCode::kInvalidArgument, "simplex grid needs positive sizes");
  }
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd current(dimension);
  Compositions(dimension, denominator, current, 0, denominator, out);
  return out;
}

GridResult GridOracle(const Game& game, int denominator,
                      const GridLimits& limits) {
  if (denominator < 1) {
    Fail(ErrorCode::kInvalidArgument, "grid resolution must be 1/n, n >= 1");
  }
  if (NumPlayers(game) != 2) {
    Fail(ErrorCode::kInvalidArgument, "the grid oracle handles two players");
  }
  const long long size0 = GridSize(PlayerIndex(game, 0), denominator);
  const long long size1 = GridSize(PlayerIndex(game, 1), denominator);
  const long double profiles = static_cast<long double>(size0) * size1;
  if (size0 + size1 > limits.max_grid_points || size0 < 0 || size1 < 0 ||
      size0 + size1 > limits.max_lp_solves || profiles > limits.max_profiles) {
    std::ostringstream msg;
    msg << "grid of " << size0 << " x " << size1
        << " strategies exceeds the oracle limits";
    Fail(ErrorCode::kGridTooLarge, msg.str());
  }
  const std::vector<StationaryStrategy> grid0 =
      StrategyGrid(PlayerIndex(game, 0), denominator);
  const std::vector<StationaryStrategy> grid1 =
      StrategyGrid(PlayerIndex(game, 1), denominator);
  const BilinearForms forms = Forms(game);

  auto vectors = [&](int player, const std::vector<StationaryStrategy>& grid) {
    Eigen::MatrixXd w(grid.size(), PlayerIndex(game, player).size());
    for (size_t a = 0; a < grid.size(); ++a) {
      w.row(a) = OwnVector(game, player, grid[a]).transpose();
    }
    return w;
  };
  const Eigen::MatrixXd w0 = vectors(0, grid0);
  const Eigen::MatrixXd w1 = vectors(1, grid1);
  // best[0][b]: player 1's best value against grid1[b]; best[1][a] likewise.
  Eigen::VectorXd best0(grid1.size()), best1(grid0.size());
  for (size_t b = 0; b < grid1.size(); ++b) {
    best0(b) = BestValue(game, 0, w1.row(b).transpose(), grid1[b]);
  }
  for (size_t a = 0; a < grid0.size(); ++a) {
    best1(a) = BestValue(game, 1, w0.row(a).transpose(), grid0[a]);
  }

  GridResult result;
  result.denominator = denominator;
  result.min_gap = std::numeric_limits<double>::infinity();
  std::vector<std::pair<size_t, size_t>> argmin;
  const Eigen::MatrixXd w1t = w1.transpose();
  for (size_t a = 0; a < grid0.size(); ++a) {
    bool own_ok = !std::isnan(best1(a));
    for (const auto& [d, bound] : forms.linear1) {
      own_ok = own_ok && d.dot(w0.row(a)) <= bound + kFeasibility;
    }
    result.profiles_checked += static_cast<long long>(grid1.size());
    if (!own_ok) continue;
    const Eigen::RowVectorXd c0 = (w0.row(a) * forms.cost[0]) * w1t;
    const Eigen::RowVectorXd c1 = (w0.row(a) * forms.cost[1]) * w1t;
    std::vector<Eigen::RowVectorXd> cons;
    for (const auto& c : forms.constraints) {
      cons.push_back((w0.row(a) * c.matrix) * w1t);
    }
    for (size_t b = 0; b < grid1.size(); ++b) {
      bool feasible = !std::isnan(best0(b));
      for (size_t k = 0; k < cons.size() && feasible; ++k) {
        feasible = cons[k](b) <= forms.constraints[k].bound + kFeasibility;
      }
      if (!feasible) continue;
      ++result.feasible_profiles;
      const double gap = std::max(c0(b) - best0(b), c1(b) - best1(a));
      if (gap < result.min_gap - kTie) {
        result.min_gap = gap;
        argmin.clear();
        result.truncated = false;
      }
      if (gap <= result.min_gap + kTie) {
        if (static_cast<int>(argmin.size()) < limits.max_reported) {
          argmin.push_back({a, b});
        } else {
          result.truncated = true;
        }
      }
    }
  }
  for (const auto& [a, b] : argmin) result.profiles.push_back({grid0[a], grid1[b]});
  return result;
}

}  // namespace csg
