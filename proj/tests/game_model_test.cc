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


#include <string>

#include <gtest/gtest.h>

#include "csg/builtin_examples.h"
#include "csg/error.h"
#include "csg/game_io.h"
#include "csg/game_model.h"
#include "csg/validation.h"
#include "json.hpp"
#include "test_support.h"

namespace csg {
namespace {

using nlohmann::json;

constexpr char kOneStateGame[] = R"({
  "schema_version": 1,
  "kind": "single_controller",
  "states": ["s"],
  "actions1": [["a"]],
  "actions2": [["b"]],
  "cost1": [[[1.0]]],
  "cost2": [[[2.0]]],
  "d1_sub": [],
  "d2": [],
  "xi1": [],
  "xi2": [],
  "trans": [[[1.0]]],
  "gamma": [1.0],
  "criterion": {"type": "average"}
})";

ErrorCode CodeOf(const std::string& text) {
  try {
    ParseGame(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "document was accepted";
  return ErrorCode::kInvalidArgument;
}

TEST(ParseGameTest, BuiltinDocumentHasExpectedShape) {
  const Game game = ParseGame(SerializeGame(BuiltinExample("sc-average")));
  const auto& g = std::get<SingleControllerGame>(game);
  EXPECT_EQ(g.num_states(), 2);
  for (int s = 0; s < 2; ++s) {
    EXPECT_EQ(g.index1.num_actions(s), 2);
    EXPECT_EQ(g.index2().num_actions(s), 2);
  }
  EXPECT_EQ(g.n1(), 1);
  EXPECT_EQ(g.n2(), 1);
  EXPECT_DOUBLE_EQ(g.xi1(0), 4.0);
  EXPECT_DOUBLE_EQ(g.xi2(0), 2.5);
}

TEST(ParseGameTest, OneStateOneActionGameIsValid) {
  const Game game = ParseGame(kOneStateGame);
  const ValidationReport report = Validate(game);
  EXPECT_TRUE(report.ok());
  EXPECT_NO_THROW(RequireValid(game));
}

TEST(ParseGameTest, RowNotSummingToOneIsRejected) {
  json doc = json::parse(SerializeGame(BuiltinExample("sc-average")));
  doc["trans"][0][0] = {0.5, 0.4};
  EXPECT_EQ(CodeOf(doc.dump()), ErrorCode::kStochasticity);
}

TEST(ParseGameTest, NegativeProbabilityIsRejected) {
  json doc = json::parse(SerializeGame(BuiltinExample("sc-average")));
  doc["trans"][0][0] = {1.5, -0.5};
  EXPECT_EQ(CodeOf(doc.dump()), ErrorCode::kNegativeProbability);
}

TEST(ParseGameTest, SchemaErrors) {
  json doc = json::parse(kOneStateGame);
  doc.erase("cost2");
  EXPECT_EQ(CodeOf(doc.dump()), ErrorCode::kSchema);

  doc = json::parse(kOneStateGame);
  doc["cost1"] = json::parse("[[[1.0, 2.0]]]");
  EXPECT_EQ(CodeOf(doc.dump()), ErrorCode::kSchema);

  doc = json::parse(kOneStateGame);
  doc["schema_version"] = 2;
  EXPECT_EQ(CodeOf(doc.dump()), ErrorCode::kSchema);

  EXPECT_EQ(CodeOf("{not json"), ErrorCode::kSchema);
}

TEST(ParseGameTest, TinyRoundingIsAccepted) {
  json doc = json::parse(SerializeGame(BuiltinExample("sc-average")));
  doc["trans"][0][0] = {0.5, 0.5 + 1e-11};
  EXPECT_NO_THROW(ParseGame(doc.dump()));
}

TEST(ParseGameTest, AssertDecoupledFlag) {
  const ParsedGame parsed = ParseGameDocument(
      SerializeGame(BuiltinExample("sc-average"), /*assert_decoupled=*/true));
  EXPECT_TRUE(parsed.assert_decoupled);
  EXPECT_FALSE(ParseGameDocument(kOneStateGame).assert_decoupled);
}

TEST(RoundTripTest, SerializeParseIsIdentityOnBuiltins) {
  for (const std::string& name : BuiltinExampleNames()) {
    SCOPED_TRACE(name);
    const Game game = BuiltinExample(name);
    const std::string text = SerializeGame(game);
    const Game back = ParseGame(text);
    EXPECT_EQ(SerializeGame(back), text);
    if (const auto* a = std::get_if<SingleControllerGame>(&game)) {
      const auto& b = std::get<SingleControllerGame>(back);
      for (int s = 0; s < a->num_states(); ++s) {
        EXPECT_EQ(a->cost1[s], b.cost1[s]);
        EXPECT_EQ(a->cost2[s], b.cost2[s]);
      }
      for (size_t k = 0; k < a->chain.transition.size(); ++k) {
        EXPECT_EQ(a->chain.transition[k], b.chain.transition[k]);
      }
      EXPECT_EQ(a->criterion, b.criterion);
    } else {
      const auto& a2 = std::get<IndependentGame>(game);
      const auto& b2 = std::get<IndependentGame>(back);
      for (int i = 0; i < a2.num_players(); ++i) {
        EXPECT_EQ(a2.cost[i], b2.cost[i]);
        EXPECT_EQ(a2.d[i][0], b2.d[i][0]);
        EXPECT_EQ(a2.xi[i], b2.xi[i]);
      }
    }
  }
}

TEST(RoundTripTest, StrategiesDocument) {
  const Game game = BuiltinExample("indep-2p");
  const StrategyProfile profile = testing::ReferenceEquilibrium("indep-2p", 0.37);
  const StrategyProfile back =
      ParseStrategies(SerializeStrategies(profile), game);
  ASSERT_EQ(back.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(back[i].Flat(), profile[i].Flat());
}

TEST(RoundTripTest, StrategiesDocumentChecksRows) {
  const Game game = BuiltinExample("indep-2p");
  json doc = json::parse(
      SerializeStrategies(testing::ReferenceEquilibrium("indep-2p")));
  doc["strategies"][0][0] = {0.5, 0.6};
  EXPECT_THROW(ParseStrategies(doc.dump(), game), Error);
  doc["strategies"][0][0] = {0.5};
  EXPECT_THROW(ParseStrategies(doc.dump(), game), Error);
}

TEST(ValidateTest, BuiltinsHaveNoErrors) {
  for (const std::string& name : BuiltinExampleNames()) {
    SCOPED_TRACE(name);
    const ValidationReport report = Validate(BuiltinExample(name));
    EXPECT_TRUE(report.errors.empty());
    EXPECT_TRUE(report.unichain_exhaustive);
    for (const UnichainProbe& probe : report.unichain_probe) {
      EXPECT_TRUE(probe.pass);
    }
  }
}

TEST(ValidateTest, SingleControllerChainIsUnichain) {
  const ValidationReport report = Validate(BuiltinExample("sc-average"));
  EXPECT_FALSE(report.unichain_probe.empty());
  for (const std::string& w : report.warnings) {
    EXPECT_EQ(w.find("transient"), std::string::npos) << w;
  }
}

TEST(ValidateTest, TransientStateIsWarned) {
  const ValidationReport report = Validate(BuiltinExample("indep-2p"));
  bool found = false;
  for (const std::string& w : report.warnings) {
    if (w.find("player 1 chain: state 1 transient") != std::string::npos) {
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(ValidateTest, TwoAbsorbingClassesFail) {
  SingleControllerGame g =
      std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  g.chain = testing::MakeChain({{{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 1.0}, {0.0, 1.0}}});
  const ValidationReport report = Validate(g);
  ASSERT_FALSE(report.errors.empty());
  EXPECT_EQ(report.errors.front().code, ErrorCode::kNotUnichain);
  bool failed_probe = false;
  for (const UnichainProbe& probe : report.unichain_probe) {
    failed_probe |= !probe.pass;
  }
  EXPECT_TRUE(failed_probe);
  try {
    RequireValid(g);
    FAIL() << "invalid game accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnichain);
  }
}

TEST(ValidateTest, SamplesLargeStrategySpaces) {
  Rng rng(5);
  SingleControllerGame g = testing::RandomScGame(
      rng, 11, 2, 0, 0, Criterion::Average());
  ValidationOptions options;
  options.max_enumeration = 64;
  options.samples = 32;
  options.seed = 17;
  const ValidationReport report = Validate(g, options);
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.unichain_exhaustive);
  EXPECT_EQ(report.probe_seed, 17u);
}

TEST(ValidateTest, EmptySubscriptionSetIsAnError) {
  SingleControllerGame g =
      std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  g.xi1(0) = 1.0;  // below the smallest attainable value 2
  const ValidationReport report = Validate(g);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.errors.front().code, ErrorCode::kInfeasibleSubscription);
}

TEST(BuiltinExampleTest, AverageGameData) {
  const auto g = std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  EXPECT_DOUBLE_EQ(g.cost1[0](0, 0), 5.0);
  EXPECT_DOUBLE_EQ(g.cost2[0](0, 0), 4.0);
  EXPECT_DOUBLE_EQ(g.chain.transition[0](0), 0.5);
  EXPECT_DOUBLE_EQ(g.chain.transition[0](1), 0.5);
  EXPECT_FALSE(g.criterion.discounted());
}

TEST(BuiltinExampleTest, DiscountedGameDiffersOnlyInCriterion) {
  const auto a = std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  const auto d =
      std::get<SingleControllerGame>(BuiltinExample("sc-discounted"));
  EXPECT_TRUE(d.criterion.discounted());
  EXPECT_DOUBLE_EQ(d.criterion.beta, 0.5);
  EXPECT_DOUBLE_EQ(d.chain.initial(0), 0.5);
  EXPECT_DOUBLE_EQ(d.chain.initial(1), 0.5);
  for (int s = 0; s < 2; ++s) {
    EXPECT_EQ(a.cost1[s], d.cost1[s]);
    EXPECT_EQ(a.cost2[s], d.cost2[s]);
    EXPECT_EQ(a.d2[0][s], d.d2[0][s]);
  }
  EXPECT_EQ(a.d1_sub[0], d.d1_sub[0]);
}

TEST(BuiltinExampleTest, IndependentGameData) {
  const auto g = std::get<IndependentGame>(BuiltinExample("indep-2p"));
  ASSERT_EQ(g.num_players(), 2);
  // Joint index with player 1 at (state 1, action 1) and player 2 anywhere.
  const JointIndex joint = g.joint();
  for (long k = 0; k < joint.total(); ++k) {
    if (joint.Digit(k, 0) == 0) {
      EXPECT_DOUBLE_EQ(g.d[0][0](k), 7.0);
    }
  }
  EXPECT_DOUBLE_EQ(g.xi[0](0), 5.0);
  EXPECT_DOUBLE_EQ(g.xi[1](0), 3.5);
}

TEST(BuiltinExampleTest, UnknownName) {
  try {
    BuiltinExample("sc-undefined");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownExample);
  }
}

TEST(StationaryStrategyTest, RowsMustBeDistributions) {
  EXPECT_THROW(StationaryStrategy::FromRows({{0.5, 0.6}}), Error);
  EXPECT_THROW(StationaryStrategy::FromRows({{1.5, -0.5}}), Error);
  const StationaryStrategy s = StationaryStrategy::FromRows({{0.25, 0.75}});
  EXPECT_DOUBLE_EQ(s(0, 1), 0.75);
}

TEST(StationaryStrategyTest, Constructors) {
  const StateActionIndex index({2, 3});
  const StationaryStrategy u = StationaryStrategy::Uniform(index);
  EXPECT_DOUBLE_EQ(u(1, 2), 1.0 / 3);
  const std::vector<int> actions = {1, 0};
  const StationaryStrategy d = StationaryStrategy::Deterministic(index, actions);
  EXPECT_DOUBLE_EQ(d(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(d(1, 0), 1.0);
  EXPECT_TRUE(d.Fits(index));
  EXPECT_FALSE(d.Fits(StateActionIndex({2, 2})));
  const StationaryStrategy back = StationaryStrategy::FromFlat(index, d.Flat());
  EXPECT_EQ(back.Flat(), d.Flat());
}

TEST(StateActionIndexTest, FlatAndUnflatAreInverse) {
  const StateActionIndex index({2, 1, 3});
  EXPECT_EQ(index.size(), 6);
  for (int k = 0; k < index.size(); ++k) {
    const auto [s, a] = index.Unflat(k);
    EXPECT_EQ(index.Flat(s, a), k);
  }
}

TEST(CheckProfileTest, RejectsWrongShapes) {
  const Game game = BuiltinExample("sc-average");
  StrategyProfile profile = testing::ReferenceEquilibrium("sc-average");
  EXPECT_NO_THROW(CheckProfile(game, profile));
  profile.pop_back();
  EXPECT_THROW(CheckProfile(game, profile), Error);
  profile.push_back(StationaryStrategy::FromRows({{1.0}}));
  EXPECT_THROW(CheckProfile(game, profile), Error);
}

}  // namespace
}  // namespace csg
