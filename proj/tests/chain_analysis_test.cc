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


#include <gtest/gtest.h>

#include "csg/best_response.h"
#include "csg/builtin_examples.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"
#include "csg/lp.h"
#include "test_support.h"

namespace csg {
namespace {

using testing::kReferenceTolerance;
using testing::ReferenceEquilibrium;

const SingleControllerGame& ScAverage() {
  static const SingleControllerGame g =
      std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  return g;
}

const IndependentGame& Indep() {
  static const IndependentGame g =
      std::get<IndependentGame>(BuiltinExample("indep-2p"));
  return g;
}

void ExpectNear(const Eigen::VectorXd& actual,
                const std::vector<double>& expected, double tol) {
  ASSERT_EQ(actual.size(), static_cast<int>(expected.size()));
  for (int i = 0; i < actual.size(); ++i) {
    EXPECT_NEAR(actual(i), expected[i], tol) << "entry " << i;
  }
}

TEST(TransitionMatrixTest, DeterministicFirstAction) {
  const std::vector<int> first = {0, 0};
  const Eigen::MatrixXd P = TransitionMatrix(
      ScAverage(), StationaryStrategy::Deterministic(ScAverage().index2(), first));
  EXPECT_DOUBLE_EQ(P(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(P(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(P(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(P(1, 1), 0.0);
}

TEST(TransitionMatrixTest, SingleState) {
  const ControlledChain chain = testing::MakeChain({{{1.0}}});
  const Eigen::MatrixXd P =
      TransitionMatrix(chain, StationaryStrategy::Uniform(chain.index));
  ASSERT_EQ(P.rows(), 1);
  EXPECT_DOUBLE_EQ(P(0, 0), 1.0);
}

TEST(TransitionMatrixTest, UniformAveragesRows) {
  const Eigen::MatrixXd P = TransitionMatrix(
      ScAverage(), StationaryStrategy::Uniform(ScAverage().index2()));
  EXPECT_NEAR(P(0, 0), 5.0 / 12, 1e-15);
  EXPECT_NEAR(P(0, 1), 7.0 / 12, 1e-15);
}

TEST(TransitionMatrixTest, AgreesWithEntrywiseOracle) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const ControlledChain chain = testing::RandomChain(rng, 4, 3);
    const StationaryStrategy g = RandomStrategy(rng, chain.index);
    const Eigen::MatrixXd P = TransitionMatrix(chain, g);
    EXPECT_LE((P - testing::TransitionOracle(chain, g)).cwiseAbs().maxCoeff(),
              1e-15);
    EXPECT_LE((P.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(TransitionMatrixTest, DimensionMismatch) {
  try {
    TransitionMatrix(ScAverage(), StationaryStrategy::FromRows({{1.0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(SteadyStateTest, TrivialChains) {
  EXPECT_DOUBLE_EQ(SteadyState(Eigen::MatrixXd::Ones(1, 1))(0), 1.0);
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  const Eigen::VectorXd pi = SteadyState(flip);
  EXPECT_NEAR(pi(0), 0.5, 1e-15);
  EXPECT_NEAR(pi(1), 0.5, 1e-15);
}

TEST(SteadyStateTest, ReferenceStateMarginals) {
  const StationaryStrategy g = ReferenceEquilibrium("sc-average")[1];
  const Eigen::VectorXd pi = SteadyState(TransitionMatrix(ScAverage(), g));
  // Row sums of the reference occupation (0.2667, 0.36, 0.3733, 0).
  ExpectNear(pi, {0.6267, 0.3733}, kReferenceTolerance);
}

TEST(SteadyStateTest, TwoClassesAreRejected) {
  try {
    SteadyState(Eigen::MatrixXd::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnichain);
  }
}

TEST(SteadyStateTest, AgreesWithPowerIteration) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const ControlledChain chain = testing::RandomChain(rng, 3 + t % 4, 2);
    const Eigen::MatrixXd P =
        TransitionMatrix(chain, RandomStrategy(rng, chain.index));
    const Eigen::VectorXd pi = SteadyState(P);
    EXPECT_LE((pi - testing::PowerIterationStationary(P)).cwiseAbs().maxCoeff(),
              1e-10);
    EXPECT_LE((pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
    EXPECT_GE(pi.minCoeff(), 0.0);
  }
}

TEST(AnalyzeChainTest, TransientAndRecurrentStates) {
  Eigen::MatrixXd P(3, 3);
  P << 0.5, 0.5, 0.0,
       0.0, 0.0, 1.0,
       0.0, 1.0, 0.0;
  const ChainStructure structure = AnalyzeChain(P);
  EXPECT_TRUE(structure.unichain());
  EXPECT_EQ(structure.transient_states, std::vector<int>({0}));
  ASSERT_EQ(structure.recurrent_classes.size(), 1u);
  EXPECT_EQ(structure.recurrent_classes[0], std::vector<int>({1, 2}));
  EXPECT_FALSE(AnalyzeChain(Eigen::MatrixXd::Identity(2, 2)).unichain());
}

TEST(AverageOccupationTest, ReferenceOccupation) {
  const OccupationMeasure x =
      AverageOccupation(ScAverage().chain, ReferenceEquilibrium("sc-average")[1]);
  EXPECT_FALSE(x.kind.discounted());
  ExpectNear(x.entries, {0.2667, 0.36, 0.3733, 0.0}, kReferenceTolerance);
  EXPECT_LE(MembershipResidual(ScAverage().chain, x), 1e-9);
}

TEST(AverageOccupationTest, SingleStateSingleAction) {
  const ControlledChain chain = testing::MakeChain({{{1.0}}});
  const OccupationMeasure x =
      AverageOccupation(chain, StationaryStrategy::Uniform(chain.index));
  ASSERT_EQ(x.entries.size(), 1);
  EXPECT_DOUBLE_EQ(x.entries(0), 1.0);
}

TEST(AverageOccupationTest, IndependentChainTwo) {
  const OccupationMeasure x =
      AverageOccupation(Indep().chains[1], ReferenceEquilibrium("indep-2p")[1]);
  ExpectNear(x.entries, {0.0, 0.2941, 0.7059, 0.0}, kReferenceTolerance);
}

TEST(DiscountedOccupationTest, ReferenceOccupation) {
  const auto g = std::get<SingleControllerGame>(BuiltinExample("sc-discounted"));
  const OccupationMeasure x =
      ControllerOccupation(g, ReferenceEquilibrium("sc-discounted")[1]);
  EXPECT_TRUE(x.kind.discounted());
  ExpectNear(x.entries, {0.3333, 0.25, 0.4167, 0.0}, kReferenceTolerance);
  EXPECT_NEAR(x.entries.sum(), 1.0, 1e-12);
}

TEST(DiscountedOccupationTest, ZeroDiscountKeepsInitialMass) {
  Rng rng(8);
  const ControlledChain chain = testing::RandomChain(rng, 3, 2);
  const StationaryStrategy g = RandomStrategy(rng, chain.index);
  Eigen::VectorXd gamma(3);
  gamma << 0.2, 0.3, 0.5;
  const OccupationMeasure x = DiscountedOccupation(chain, g, gamma, 0.0);
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 2; ++a) {
      EXPECT_NEAR(x.entries(chain.index.Flat(s, a)), gamma(s) * g(s, a), 1e-15);
    }
  }
}

TEST(DiscountedOccupationTest, AgreesWithSeriesOracle) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const ControlledChain chain = testing::RandomChain(rng, 3, 2);
    const StationaryStrategy g = RandomStrategy(rng, chain.index);
    const Eigen::VectorXd gamma = DirichletOnes(rng, 3);
    const OccupationMeasure x = DiscountedOccupation(chain, g, gamma, 0.9);
    const Eigen::VectorXd mass = testing::SeriesDiscounted(
        testing::TransitionOracle(chain, g), gamma, 0.9, 200);
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        EXPECT_NEAR(x.entries(chain.index.Flat(s, a)), mass(s) * g(s, a), 1e-6);
      }
    }
    EXPECT_NEAR(x.entries.sum(), 1.0, 1e-9);
    EXPECT_LE(MembershipResidual(chain, x), 1e-9);
  }
}

TEST(MembershipResidualTest, DetectsViolations) {
  OccupationMeasure x =
      AverageOccupation(ScAverage().chain, ReferenceEquilibrium("sc-average")[1]);
  x.entries(0) += 0.1;
  EXPECT_GT(MembershipResidual(ScAverage().chain, x), 0.05);
  x.entries(0) = -0.2;
  EXPECT_GE(MembershipResidual(ScAverage().chain, x), 0.2);
}

TEST(RecoverStrategyTest, ReferenceStrategy) {
  const Eigen::Vector4d x(0.2667, 0.36, 0.3733, 0.0);
  const StationaryStrategy g = RecoverStrategy(ScAverage().index2(), x);
  EXPECT_NEAR(g(0, 0), 0.4256, kReferenceTolerance);
  EXPECT_NEAR(g(0, 1), 0.5744, kReferenceTolerance);
  EXPECT_DOUBLE_EQ(g(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(g(1, 1), 0.0);
}

TEST(RecoverStrategyTest, ZeroMassStatesAreUniform) {
  const StateActionIndex index({2, 3, 2});
  Eigen::VectorXd x = Eigen::VectorXd::Zero(index.size());
  x(index.Flat(1, 2)) = 1.0;
  const StationaryStrategy g = RecoverStrategy(index, x);
  EXPECT_DOUBLE_EQ(g(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(g(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(g(2, 1), 0.5);

  const Eigen::Vector4d x1(0.0, 0.0, 0.0, 1.0);
  const StationaryStrategy f1 = RecoverStrategy(Indep().chains[0].index, x1);
  EXPECT_DOUBLE_EQ(f1(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(f1(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(f1(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(f1(1, 1), 1.0);
}

TEST(RoundTripTest, RecurrentRowsAreRecovered) {
  Rng rng(12);
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    for (int player = 0; player < NumPlayers(game); ++player) {
      const ControlledChain* chain = nullptr;
      if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
        if (player == 0) continue;
        chain = &sc->chain;
      } else {
        chain = &std::get<IndependentGame>(game).chains[player];
      }
      for (int t = 0; t < 100; ++t) {
        const StationaryStrategy g = RandomStrategy(rng, chain->index);
        const OccupationMeasure x = AverageOccupation(*chain, g);
        const StationaryStrategy back = RecoverStrategy(chain->index, x.entries);
        const ChainStructure structure =
            AnalyzeChain(TransitionMatrix(*chain, g));
        for (const auto& cls : structure.recurrent_classes) {
          for (int s : cls) {
            EXPECT_LE((back.row(s) - g.row(s)).cwiseAbs().maxCoeff(), 1e-9);
          }
        }
        EXPECT_LE(MembershipResidual(*chain, x), 1e-9);
      }
    }
  }
}

TEST(MarginalCostsTest, UniformOpponentAveragesRows) {
  Eigen::MatrixXd c2(2, 2);
  c2 << 4, 3, 2, 6;
  const SingleControllerGame g = testing::MatrixGame(Eigen::MatrixXd::Zero(2, 2), c2);
  const MarginalCosts m =
      PlayerTwoMarginals(g, StationaryStrategy::Uniform(g.index1));
  EXPECT_DOUBLE_EQ(m.cost(0), 3.0);
  EXPECT_DOUBLE_EQ(m.cost(1), 4.5);
}

TEST(MarginalCostsTest, OneActionOpponentSeesSlice) {
  Eigen::MatrixXd c1(1, 3), c2(1, 3);
  c1 << 1, 2, 3;
  c2 << 7, 8, 9;
  const SingleControllerGame g = testing::MatrixGame(c1, c2);
  const MarginalCosts m2 =
      PlayerTwoMarginals(g, StationaryStrategy::Uniform(g.index1));
  EXPECT_EQ(m2.cost, Eigen::Vector3d(7, 8, 9));
  Eigen::MatrixXd d1(3, 1), d2(3, 1);
  d1 << 1, 2, 3;
  d2 << 7, 8, 9;
  const SingleControllerGame h = testing::MatrixGame(d1, d2);
  // Player 2 has one action, so its occupation is the point mass.
  const MarginalCosts m1 = PlayerOneMarginals(h, Eigen::VectorXd::Ones(1));
  EXPECT_EQ(m1.cost, Eigen::Vector3d(1, 2, 3));
}

TEST(MarginalCostsTest, IndependentMarginalsMatchHandExpansion) {
  const IndependentGame& g = Indep();
  Rng rng(13);
  const StationaryStrategy f2 = RandomStrategy(rng, g.chains[1].index);
  const Eigen::VectorXd x2 = testing::OccupationOracle(
      g.chains[1], f2, Criterion::Average(), g.chains[1].initial);
  const MarginalCosts m = ComputeMarginalCosts(
      g, {StationaryStrategy::Uniform(g.chains[0].index), f2}, 0);
  const JointIndex joint = g.joint();
  for (int k1 = 0; k1 < 4; ++k1) {
    double c = 0.0, d = 0.0;
    for (long k = 0; k < joint.total(); ++k) {
      if (joint.Digit(k, 0) != k1) continue;
      c += x2(joint.Digit(k, 1)) * g.cost[0](k);
      d += x2(joint.Digit(k, 1)) * g.d[0][0](k);
    }
    EXPECT_NEAR(m.cost(k1), c, 1e-9);
    EXPECT_NEAR(m.constraint[0](k1), d, 1e-9);
  }
}

TEST(MarginalCostsTest, PlayerOneLpAtReferenceStrategy) {
  const StrategyProfile profile = ReferenceEquilibrium("indep-2p");
  const LpSolution sol = SolveLp(BuildIndepLp(Indep(), 0, profile));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective_value, 1.2941, kReferenceTolerance);
}

TEST(ExpectedCostsTest, ReferenceCosts) {
  struct Case {
    std::string name;
    double c1, c2;
  };
  for (const Case& c : {Case{"sc-average", 4.4268, 3.0279},
                        Case{"sc-discounted", 4.2082, 2.9166},
                        Case{"indep-2p", 1.2941, 1.7059}}) {
    SCOPED_TRACE(c.name);
    const CostReport report =
        ExpectedCosts(BuiltinExample(c.name), ReferenceEquilibrium(c.name));
    EXPECT_NEAR(report.main_costs[0], c.c1, kReferenceTolerance);
    EXPECT_NEAR(report.main_costs[1], c.c2, kReferenceTolerance);
    // Four-decimal rounding can leave a tight bound slightly violated.
    for (const auto& player : report.slacks) {
      for (double slack : player) EXPECT_GE(slack, -kReferenceTolerance);
    }
  }
}

TEST(ExpectedCostsTest, SubscriptionCostIgnoresVisitation) {
  const StrategyProfile profile = ReferenceEquilibrium("sc-average");
  const CostReport report = ExpectedCosts(ScAverage(), profile);
  const double expected = ScAverage().d1_sub[0].dot(profile[0].Flat());
  EXPECT_NEAR(report.constraint_costs[0][0], expected, 1e-12);
  EXPECT_NEAR(report.slacks[0][0], ScAverage().xi1(0) - expected, 1e-12);
}

TEST(ExpectedCostsTest, InfeasibleStrategiesAreFlagged) {
  StrategyProfile profile = ReferenceEquilibrium("sc-average");
  profile[0] = StationaryStrategy::FromRows({{0.0, 1.0}, {1.0, 0.0}});
  const CostReport report = ExpectedCosts(ScAverage(), profile);
  EXPECT_FALSE(report.bounds_satisfied[0][0]);
  EXPECT_NEAR(report.MaxViolation(), 2.0, 1e-12);
}

// Costs are linear in f and in each occupation measure.
TEST(ExpectedCostsTest, Bilinearity) {
  Rng rng(14);
  for (const std::string& name : BuiltinExampleNames()) {
    SCOPED_TRACE(name);
    const Game game = BuiltinExample(name);
    for (int t = 0; t < 20; ++t) {
      const int player = UniformInt(rng, NumPlayers(game));
      StrategyProfile a, b;
      for (int i = 0; i < NumPlayers(game); ++i) {
        a.push_back(RandomStrategy(rng, PlayerIndex(game, i)));
      }
      b = a;
      b[player] = RandomStrategy(rng, PlayerIndex(game, player));
      const double lambda = Uniform01(rng);
      StrategyProfile mix = a;
      const StateActionIndex index = PlayerIndex(game, player);
      const bool plain = std::holds_alternative<SingleControllerGame>(game) &&
                         player == 0;
      if (plain) {
        mix[player] = StationaryStrategy::FromFlat(
            index, lambda * a[player].Flat() + (1 - lambda) * b[player].Flat(),
            1e-12);
      } else {
        const auto xa = OccupationVectors(game, a)[player];
        const auto xb = OccupationVectors(game, b)[player];
        mix[player] = RecoverStrategy(index, lambda * xa + (1 - lambda) * xb);
      }
      const CostReport ra = ExpectedCosts(game, a);
      const CostReport rb = ExpectedCosts(game, b);
      const CostReport rm = ExpectedCosts(game, mix);
      for (size_t i = 0; i < rm.main_costs.size(); ++i) {
        EXPECT_NEAR(rm.main_costs[i],
                    lambda * ra.main_costs[i] + (1 - lambda) * rb.main_costs[i],
                    1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace csg
