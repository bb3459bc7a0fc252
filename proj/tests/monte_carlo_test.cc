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
#include "csg/monte_carlo.h"
#include "csg/nash_solver.h"
#include "test_support.h"

namespace csg {
namespace {

StrategyProfile Exact(const std::string& name) {
  const auto exact = PolishEquilibrium(BuiltinExample(name),
                                       testing::ReferenceEquilibrium(name));
  if (!exact) throw std::runtime_error("no exact equilibrium near " + name);
  return *exact;
}

double MaxOccupationError(const SimReport& sim,
                          const std::vector<Eigen::VectorXd>& analytic) {
  double worst = 0.0;
  for (size_t c = 0; c < analytic.size(); ++c) {
    worst = std::max(
        worst, (sim.empirical_occupation[c] - analytic[c]).cwiseAbs().maxCoeff());
  }
  return worst;
}

TEST(SimulateTest, DeterministicGameIsExact) {
  const Game game =
      testing::MatrixGame(Eigen::MatrixXd::Constant(1, 1, 3.0),
                          Eigen::MatrixXd::Constant(1, 1, 3.0));
  const StrategyProfile profile = {StationaryStrategy::FromRows({{1.0}}),
                                   StationaryStrategy::FromRows({{1.0}})};
  const SimReport sim = Simulate(game, profile, 1000, 1);
  EXPECT_EQ(sim.empirical_costs[0], 3.0);
  EXPECT_EQ(sim.empirical_costs[1], 3.0);
  EXPECT_EQ(sim.cost_errors[0], 0.0);
  EXPECT_EQ(sim.empirical_occupation[0](0), 1.0);
  const CompareReport cmp =
      Compare(sim, ExpectedCosts(game, profile), AnalyticOccupations(game, profile), 3.0);
  EXPECT_TRUE(cmp.all_pass());

  // Zero variance demands equality, so any offset fails.
  CostReport off = ExpectedCosts(game, profile);
  off.main_costs[0] += 1e-6;
  EXPECT_FALSE(Compare(sim, off, AnalyticOccupations(game, profile), 3.0).all_pass());
}

TEST(SimulateTest, Reproducible) {
  const Game game = BuiltinExample("sc-average");
  const StrategyProfile profile = testing::ReferenceEquilibrium("sc-average");
  const std::string a = SerializeSimReport(Simulate(game, profile, 5000, 9));
  const std::string b = SerializeSimReport(Simulate(game, profile, 5000, 9));
  const std::string c = SerializeSimReport(Simulate(game, profile, 5000, 10));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(SimulateTest, OccupationIsNormalized) {
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    const SimReport sim =
        Simulate(game, testing::ReferenceEquilibrium(name), 20000, 3);
    for (const Eigen::VectorXd& x : sim.empirical_occupation) {
      EXPECT_NEAR(x.sum(), 1.0, 1e-12) << name;
      EXPECT_GE(x.minCoeff(), 0.0);
    }
  }
}

TEST(SimulateTest, IndependentChainTwoOccupation) {
  const Game game = BuiltinExample("indep-2p");
  const SimReport sim =
      Simulate(game, testing::ReferenceEquilibrium("indep-2p"), 100000, 4);
  ASSERT_EQ(sim.empirical_occupation.size(), 2u);
  const Eigen::Vector4d expected(0.0, 0.2941, 0.7059, 0.0);
  EXPECT_LE((sim.empirical_occupation[1] - expected).cwiseAbs().maxCoeff(), 0.02);
}

TEST(SimulateTest, AverageCostNearReference) {
  const Game game = BuiltinExample("sc-average");
  const SimReport sim = Simulate(game, Exact("sc-average"), 100000, 5);
  EXPECT_NEAR(sim.empirical_costs[0], 4.4268, 0.05 * 4.4268);
  EXPECT_FALSE(sim.discounted);
  EXPECT_EQ(sim.horizon, 100000);
  // Player 1's subscription functional has no trajectory counterpart.
  EXPECT_TRUE(sim.empirical_constraint_costs[0].empty());
  EXPECT_EQ(sim.empirical_constraint_costs[1].size(), 1u);
}

TEST(SimulateTest, DiscountedEpisodes) {
  const Game game = BuiltinExample("sc-discounted");
  const StrategyProfile profile = Exact("sc-discounted");
  const SimReport sim = Simulate(game, profile, 100000, 6);
  EXPECT_TRUE(sim.discounted);
  EXPECT_EQ(sim.episode_length, 44);
  EXPECT_EQ(sim.episodes, 100000 / 44);
  EXPECT_NEAR(sim.truncation_bound, std::pow(0.5, 44) * 7.0, 1e-20);
  const CostReport analytic = ExpectedCosts(game, profile);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(sim.empirical_costs[i], analytic.main_costs[i],
                4 * sim.cost_errors[i]);
  }
}

TEST(CompareTest, TenSigmaShiftFails) {
  const Game game = BuiltinExample("indep-2p");
  const StrategyProfile profile = testing::ReferenceEquilibrium("indep-2p");
  const SimReport sim = Simulate(game, profile, 100000, 7);
  CostReport analytic = ExpectedCosts(game, profile);
  const auto occ = AnalyticOccupations(game, profile);
  analytic.main_costs[1] += 10 * sim.cost_errors[1];
  const CompareReport cmp = Compare(sim, analytic, occ, 3.0);
  int failed = 0;
  for (const Comparison& c : cmp.items) {
    if (!c.pass) {
      ++failed;
      EXPECT_NE(c.quantity.find("cost"), std::string::npos) << c.quantity;
    }
  }
  EXPECT_EQ(failed, 1);
}

TEST(CompareTest, ShapeMismatch) {
  const Game game = BuiltinExample("indep-2p");
  const StrategyProfile profile = testing::ReferenceEquilibrium("indep-2p");
  const SimReport sim = Simulate(game, profile, 1000, 7);
  auto occ = AnalyticOccupations(game, profile);
  occ.pop_back();
  try {
    Compare(sim, ExpectedCosts(game, profile), occ, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  occ = AnalyticOccupations(game, profile);
  occ[0] = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(Compare(sim, ExpectedCosts(game, profile), occ, 3.0), Error);
}

TEST(CompareTest, MostSeedsPass) {
  for (const std::string& name : BuiltinExampleNames()) {
    SCOPED_TRACE(name);
    const Game game = BuiltinExample(name);
    const StrategyProfile profile = Exact(name);
    const CostReport analytic = ExpectedCosts(game, profile);
    const auto occ = AnalyticOccupations(game, profile);
    std::map<std::string, int> failures;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const CompareReport cmp =
          Compare(Simulate(game, profile, 20000, seed), analytic, occ, 3.0);
      for (const Comparison& c : cmp.items) failures[c.quantity] += !c.pass;
    }
    for (const auto& [quantity, count] : failures) {
      EXPECT_LE(count, 2) << quantity;
    }
  }
}

TEST(SimReportTest, JsonRoundTrip) {
  const Game game = BuiltinExample("sc-discounted");
  const SimReport sim =
      Simulate(game, testing::ReferenceEquilibrium("sc-discounted"), 3000, 8);
  const std::string text = SerializeSimReport(sim);
  const SimReport back = ParseSimReport(text);
  EXPECT_EQ(SerializeSimReport(back), text);
  EXPECT_EQ(back.seed, 8u);
  EXPECT_EQ(back.empirical_costs, sim.empirical_costs);
  EXPECT_EQ(back.empirical_occupation[0], sim.empirical_occupation[0]);
  EXPECT_NE(text.find("\"sim_report\""), std::string::npos);
  EXPECT_THROW(ParseSimReport("{\"kind\": \"game\"}"), Error);
}

TEST(SimReportTest, SingleBatchHasNoError) {
  const Game game = BuiltinExample("sc-average");
  SimOptions options;
  options.batches = 1;
  const SimReport sim =
      Simulate(game, testing::ReferenceEquilibrium("sc-average"), 100, 1, options);
  EXPECT_TRUE(std::isinf(sim.cost_errors[0]));
  const SimReport back = ParseSimReport(SerializeSimReport(sim));
  EXPECT_TRUE(std::isinf(back.cost_errors[0]));
}

TEST(SimulateTest, BurnInShiftsStart) {
  const Game game = BuiltinExample("sc-average");
  SimOptions options;
  options.burn_in = 1000;
  const StrategyProfile profile = testing::ReferenceEquilibrium("sc-average");
  const SimReport a = Simulate(game, profile, 5000, 2, options);
  const SimReport b = Simulate(game, profile, 5000, 2);
  EXPECT_NE(a.empirical_costs[0], b.empirical_costs[0]);
  EXPECT_THROW(Simulate(game, profile, 0, 2), Error);
}

// Max-norm occupation error shrinks roughly like 1/sqrt(horizon).
TEST(SimulateTest, ConvergenceTrend) {
  const Game game = BuiltinExample("sc-average");
  const StrategyProfile profile = Exact("sc-average");
  const auto analytic = AnalyticOccupations(game, profile);
  std::vector<double> mean_error;
  for (long long horizon : {1000LL, 10000LL, 100000LL}) {
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      sum += MaxOccupationError(Simulate(game, profile, horizon, seed), analytic);
    }
    mean_error.push_back(sum / 20);
  }
  EXPECT_LT(mean_error[1], mean_error[0] / 2);
  EXPECT_LT(mean_error[2], mean_error[1] / 2);
  EXPECT_GT(mean_error[2], mean_error[0] / 30);
}

}  // namespace
}  // namespace csg
