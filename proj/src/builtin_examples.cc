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

#include "csg/builtin_examples.h"

#include "csg/error.h"

namespace csg {
namespace {

ControlledChain MakeChain(const std::vector<std::string>& states,
                          const std::vector<std::vector<double>>& rows,
                          const std::vector<double>& initial) {
  ControlledChain chain;
  chain.state_ids = states;
  const int n = static_cast<int>(states.size());
  chain.action_ids.assign(n, {"1", "2"});
  chain.index = StateActionIndex(std::vector<int>(n, 2));
  for (const auto& row : rows) {
    chain.transition.push_back(
        Eigen::Map<const Eigen::VectorXd>(row.data(), row.size()));
  }
  chain.initial = Eigen::Map<const Eigen::VectorXd>(initial.data(), n);
  return chain;
}

Eigen::MatrixXd Mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

SingleControllerGame SingleController(Criterion criterion) {
  SingleControllerGame g;
  g.chain = MakeChain({"1", "2"},
                      {{0.5, 0.5}, {1.0 / 3.0, 2.0 / 3.0}, {1.0, 0.0},
                       {0.2, 0.8}},
                      {0.5, 0.5});
  g.actions1.assign(2, {"1", "2"});
  g.index1 = StateActionIndex({2, 2});
  g.cost1 = {Mat2(5, 6, 7, 4), Mat2(2, 4, 3, 3)};
  g.cost2 = {Mat2(4, 3, 3, 6), Mat2(3, 2, 1, 4)};
  // Player 2's resource cost depends on (s, a2) only.
  g.d2 = {{Mat2(1, 2, 1, 2), Mat2(4, 5, 4, 5)}};
  Eigen::VectorXd sub(4);
  sub << 2, 3, 3, 1;
  g.d1_sub = {sub};
  g.xi1 = Eigen::VectorXd::Constant(1, 4.0);
  g.xi2 = Eigen::VectorXd::Constant(1, 2.5);
  g.criterion = criterion;
  return g;
}

IndependentGame TwoChains() {
  IndependentGame g;
  g.chains.push_back(MakeChain(
      {"1", "2"}, {{0.5, 0.5}, {0.33, 0.67}, {1.0, 0.0}, {0.0, 1.0}},
      {0.5, 0.5}));
  g.chains.push_back(MakeChain(
      {"3", "4"}, {{0.67, 0.33}, {0.4, 0.6}, {0.25, 0.75}, {1.0, 0.0}},
      {0.5, 0.5}));

  // Cost pair (c1, c2) per joint state (s1, s2): rows a1, columns a2.
  struct Block {
    double c[2][2][2];
  };
  const Block blocks[2][2] = {
      {{{{{2, 3}, {3, 1}}, {{4, 2}, {2, 4}}}},
       {{{{5, 2}, {3, 4}}, {{3, 2}, {4, 1}}}}},
      {{{{{3, 5}, {4, 6}}, {{5, 2}, {2, 1}}}},
       {{{{4, 5}, {3, 1}}, {{1, 2}, {4, 3}}}}},
  };
  const JointIndex joint = g.joint();
  g.cost.assign(2, Eigen::VectorXd::Zero(joint.total()));
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        for (int a2 = 0; a2 < 2; ++a2) {
          const long k = (2 * s1 + a1) * joint.stride(0) +
                         (2 * s2 + a2) * joint.stride(1);
          g.cost[0](k) = blocks[s1][s2].c[a1][a2][0];
          g.cost[1](k) = blocks[s1][s2].c[a1][a2][1];
        }
      }
    }
  }

  const double own[2][4] = {{7, 4, 2, 5}, {4, 3, 3, 5}};
  g.d.resize(2);
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd d(joint.total());
    for (long k = 0; k < joint.total(); ++k) d(k) = own[i][joint.Digit(k, i)];
    g.d[i].push_back(d);
  }
  g.xi = {Eigen::VectorXd::Constant(1, 5.0), Eigen::VectorXd::Constant(1, 3.5)};
  return g;
}

}  // namespace

std::vector<std::string> BuiltinExampleNames() {
  return {"sc-average", "sc-discounted", "indep-2p"};
}

Game BuiltinExample(const std::string& name) {
  if (name == "sc-average") return SingleController(Criterion::Average());
  if (name == "sc-discounted") {
    return SingleController(Criterion::Discounted(0.5));
  }
  if (name == "indep-2p") return TwoChains();
  Fail(ErrorCode::kUnknownExample, "unknown built-in example '" + name + "'");
}

}  // namespace csg
