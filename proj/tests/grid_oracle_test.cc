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


#include <cmath>

#include <gtest/gtest.h>

#include "csg/builtin_examples.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"
#include "csg/grid_oracle.h"
#include "csg/nash_solver.h"
#include "test_support.h"

namespace csg {
namespace {

constexpr int kDen = 64;

bool OnGrid(const Eigen::VectorXd& v, int den) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i) * den - std::round(v(i) * den)) > 1e-12) return false;
  }
  return true;
}

TEST(SimplexGridTest, CountsAndEntries) {
  const auto grid = SimplexGrid(3, 4);
  EXPECT_EQ(grid.size(), 15u);
  for (const Eigen::VectorXd& p : grid) {
    EXPECT_NEAR(p.sum(), 1.0, 1e-15);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_TRUE(OnGrid(p, 4));
  }
  EXPECT_EQ(SimplexGrid(1, 9).size(), 1u);
  EXPECT_EQ(SimplexGrid(2, 64).size(), 65u);
  EXPECT_THROW(SimplexGrid(0, 4), Error);
}

TEST(GridOracleTest, DominantActionsGiveUniqueExactEquilibrium) {
  Eigen::MatrixXd c1(2, 2), c2(2, 2);
  c1 << 1, 2, 3, 4;  // row 1 dominates for player 1
  c2 << 5, 1, 6, 2;  // column 2 dominates for player 2
  const GridResult r = GridOracle(testing::MatrixGame(c1, c2), 8);
  EXPECT_EQ(r.min_gap, 0.0);
  ASSERT_EQ(r.profiles.size(), 1u);
  EXPECT_DOUBLE_EQ(r.profiles[0][0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r.profiles[0][1](0, 1), 1.0);
  EXPECT_EQ(r.profiles_checked, 81);
  EXPECT_FALSE(r.truncated);
}

TEST(GridOracleTest, IndependentGame) {
  const Game game = BuiltinExample("indep-2p");
  const GridResult r = GridOracle(game, kDen);
  EXPECT_LE(r.min_gap, 1e-12);
  ASSERT_FALSE(r.profiles.empty());
  for (const StrategyProfile& p : r.profiles) {
    EXPECT_LE(std::abs(p[1](0, 1) - 1.0), 1.0 / kDen);
    EXPECT_LE(std::abs(p[1](1, 0) - 1.0), 1.0 / kDen);
  }
  // Player 1's transient row is free.
  double lo = 1.0, hi = 0.0;
  for (const StrategyProfile& p : r.profiles) {
    lo = std::min(lo, p[0](0, 0));
    hi = std::max(hi, p[0](0, 0));
  }
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);

  const NashCertificate cert = SolveNash(game);
  EXPECT_LE(cert.epsilon, r.min_gap + 1e-6);
}

// The reported gap is the exact best-response gap of the reported profiles,
// and no sampled grid profile beats it.
TEST(GridOracleTest, AverageSingleControllerGame) {
  const Game game = BuiltinExample("sc-average");
  const GridResult r = GridOracle(game, kDen);
  EXPECT_GT(r.min_gap, 0.0);
  ASSERT_FALSE(r.profiles.empty());
  for (const StrategyProfile& p : r.profiles) {
    for (const StationaryStrategy& s : p) {
      for (const auto& row : s.rows()) EXPECT_TRUE(OnGrid(row, kDen));
    }
    const NashCertificate cert = VerifyNash(game, p, 1.0);
    EXPECT_NEAR(cert.epsilon, r.min_gap, 1e-9);
    EXPECT_LE(cert.constraint_violation, 1e-9);
  }

  Rng rng(61);
  const auto fgrid = SimplexGrid(2, kDen);
  int feasible = 0;
  for (int t = 0; t < 4000; ++t) {
    std::vector<Eigen::VectorXd> f_rows, g_rows;
    for (int s = 0; s < 2; ++s) {
      f_rows.push_back(fgrid[UniformInt(rng, fgrid.size())]);
      g_rows.push_back(fgrid[UniformInt(rng, fgrid.size())]);
    }
    const StrategyProfile p = {StationaryStrategy(f_rows),
                               StationaryStrategy(g_rows)};
    const NashCertificate cert = VerifyNash(game, p, 1.0);
    if (cert.constraint_violation > 1e-9) continue;
    ++feasible;
    EXPECT_GE(cert.epsilon, r.min_gap - 1e-12);
  }
  EXPECT_GT(feasible, 50);

  // The grid profiles next to the reference equilibrium are no better.
  const StrategyProfile ref = testing::ReferenceEquilibrium("sc-average");
  auto around = [](double x) {
    return std::vector<double>{std::floor(x * kDen) / kDen,
                               std::ceil(x * kDen) / kDen};
  };
  for (double f1 : around(ref[0](0, 0))) {
    for (double f2 : around(ref[0](1, 0))) {
      for (double g1 : around(ref[1](0, 0))) {
        const StrategyProfile p = {
            StationaryStrategy::FromRows({{f1, 1 - f1}, {f2, 1 - f2}}),
            StationaryStrategy::FromRows({{g1, 1 - g1}, {1.0, 0.0}})};
        const NashCertificate cert = VerifyNash(game, p, 1.0);
        if (cert.constraint_violation > 1e-9) continue;
        EXPECT_GE(cert.epsilon, r.min_gap - 1e-12);
      }
    }
  }

  const NashCertificate solved = SolveNash(game);
  EXPECT_LE(solved.epsilon, r.min_gap + 1e-6);
}

TEST(GridOracleTest, Limits) {
  const Game game = BuiltinExample("sc-average");
  GridLimits limits;
  limits.max_grid_points = 100;
  try {
    GridOracle(game, kDen, limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridTooLarge);
  }
  limits = GridLimits();
  limits.max_reported = 1;
  const GridResult r = GridOracle(BuiltinExample("indep-2p"), 8, limits);
  EXPECT_EQ(r.profiles.size(), 1u);
  EXPECT_TRUE(r.truncated);
  EXPECT_THROW(GridOracle(game, 0), Error);
}

TEST(GridOracleTest, TwoPlayersOnly) {
  IndependentGame g;
  Rng rng(62);
  for (int i = 0; i < 3; ++i) g.chains.push_back(testing::RandomChain(rng, 1, 2));
  for (int i = 0; i < 3; ++i) {
    g.cost.push_back(Eigen::VectorXd::Zero(8));
    g.d.push_back({});
    g.xi.push_back(Eigen::VectorXd());
  }
  try {
    GridOracle(g, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace csg
