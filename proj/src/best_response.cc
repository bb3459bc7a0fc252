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

#include "csg/best_response.h"

#include <cmath>
#include <sstream>

#include "csg/error.h"

namespace csg {
namespace {

std::string PairName(const std::string& prefix, const std::string& state,
                     const std::string& action) {
  return prefix + "(" + state + "," + action + ")";
}

std::string Indexed(const std::string& prefix, const std::string& id) {
  return prefix + "(" + id + ")";
}

}  // namespace

LinearProgram BuildP1LpFromMarginals(const SingleControllerGame& game,
                                     const MarginalCosts& m) {
  LinearProgram lp;
  const StateActionIndex& k1 = game.index1;
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < k1.num_actions(s); ++a) {
      lp.AddVariable(PairName("f", game.chain.state_ids[s], game.actions1[s][a]),
                     m.cost(k1.Flat(s, a)));
    }
  }
  for (int k = 0; k < game.n1(); ++k) {
    lp.AddConstraint(game.d1_sub[k], Relation::kLessEqual, game.xi1(k),
                     Indexed("sub", std::to_string(k + 1)));
  }
  for (int s = 0; s < game.num_states(); ++s) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(k1.size());
    row.segment(k1.offset(s), k1.num_actions(s)).setOnes();
    lp.AddConstraint(row, Relation::kEqual, 1.0,
                     Indexed("simplex", game.chain.state_ids[s]));
  }
  return lp;
}

LinearProgram BuildP1DualFromMarginals(const SingleControllerGame& game,
                                       const MarginalCosts& m) {
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  const int n = game.num_states();
  for (int s = 0; s < n; ++s) {
    lp.AddVariable(Indexed("z", game.chain.state_ids[s]), 1.0, -kInf, kInf);
  }
  for (int k = 0; k < game.n1(); ++k) {
    lp.AddVariable(Indexed("delta1", std::to_string(k + 1)), -game.xi1(k));
  }
  const StateActionIndex& k1 = game.index1;
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < k1.num_actions(s); ++a) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(lp.num_variables());
      row(s) = 1.0;
      for (int k = 0; k < game.n1(); ++k) {
        row(n + k) = -game.d1_sub[k](k1.Flat(s, a));
      }
      lp.AddConstraint(row, Relation::kLessEqual, m.cost(k1.Flat(s, a)),
                       PairName("dual", game.chain.state_ids[s],
                                game.actions1[s][a]));
    }
  }
  return lp;
}

LinearProgram BuildOccupationLp(const ControlledChain& chain,
                                const Criterion& criterion,
                                const MarginalCosts& m,
                                const Eigen::VectorXd& xi) {
  const StateActionIndex& idx = chain.index;
  const int n = chain.num_states();
  const double beta = criterion.discounted() ? criterion.beta : 1.0;
  LinearProgram lp;
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < idx.num_actions(s); ++a) {
      lp.AddVariable(PairName("x", chain.state_ids[s], chain.action_ids[s][a]),
                     m.cost(idx.Flat(s, a)));
    }
  }
  for (int t = 0; t < n; ++t) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(idx.size());
    for (int k = 0; k < idx.size(); ++k) {
      const int s = idx.Unflat(k).first;
      row(k) = (s == t ? 1.0 : 0.0) - beta * chain.transition[k](t);
    }
    const double rhs =
        criterion.discounted() ? (1.0 - beta) * chain.initial(t) : 0.0;
    lp.AddConstraint(row, Relation::kEqual, rhs,
                     Indexed("balance", chain.state_ids[t]));
  }
  if (!criterion.discounted()) {
    lp.AddConstraint(Eigen::VectorXd::Ones(idx.size()), Relation::kEqual, 1.0,
                     "norm");
  }
  for (size_t l = 0; l < m.constraint.size(); ++l) {
    lp.AddConstraint(m.constraint[l], Relation::kLessEqual, xi(l),
                     Indexed("cons", std::to_string(l + 1)));
  }
  return lp;
}

LinearProgram BuildOccupationDual(const ControlledChain& chain,
                                  const Criterion& criterion,
                                  const MarginalCosts& m,
                                  const Eigen::VectorXd& xi) {
  const StateActionIndex& idx = chain.index;
  const int n = chain.num_states();
  const bool discounted = criterion.discounted();
  const double beta = discounted ? criterion.beta : 1.0;
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  int u0 = 0;
  if (!discounted) {
    lp.AddVariable("v", 1.0, -kInf, kInf);
    u0 = 1;
  }
  for (int s = 0; s < n; ++s) {
    const double weight = discounted ? (1.0 - beta) * chain.initial(s) : 0.0;
    lp.AddVariable(Indexed("u", chain.state_ids[s]), weight, -kInf, kInf);
  }
  const int d0 = lp.num_variables();
  for (size_t l = 0; l < m.constraint.size(); ++l) {
    lp.AddVariable(Indexed("delta", std::to_string(l + 1)), -xi(l));
  }
  for (int k = 0; k < idx.size(); ++k) {
    const auto [s, a] = idx.Unflat(k);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(lp.num_variables());
    if (!discounted) row(0) = 1.0;
    row(u0 + s) += 1.0;
    for (int t = 0; t < n; ++t) row(u0 + t) -= beta * chain.transition[k](t);
    for (size_t l = 0; l < m.constraint.size(); ++l) {
      row(d0 + l) = -m.constraint[l](k);
    }
    lp.AddConstraint(row, Relation::kLessEqual, m.cost(k),
                     PairName("dual", chain.state_ids[s], chain.action_ids[s][a]));
  }
  return lp;
}

LinearProgram BuildP1Lp(const SingleControllerGame& game,
                        const StationaryStrategy& g) {
  return BuildP1LpFromMarginals(
      game, PlayerOneMarginals(game, ControllerOccupation(game, g).entries));
}

LinearProgram BuildP1Dual(const SingleControllerGame& game,
                          const StationaryStrategy& g) {
  return BuildP1DualFromMarginals(
      game, PlayerOneMarginals(game, ControllerOccupation(game, g).entries));
}

LinearProgram BuildP2Lp(const SingleControllerGame& game,
                        const StationaryStrategy& f) {
  return BuildOccupationLp(game.chain, game.criterion,
                           PlayerTwoMarginals(game, f), game.xi2);
}

LinearProgram BuildP2Dual(const SingleControllerGame& game,
                          const StationaryStrategy& f) {
  return BuildOccupationDual(game.chain, game.criterion,
                             PlayerTwoMarginals(game, f), game.xi2);
}

LinearProgram BuildIndepLp(const IndependentGame& game, int player,
                           const StrategyProfile& profile) {
  return BuildOccupationLp(game.chains.at(player), Criterion::Average(),
                           ComputeMarginalCosts(game, profile, player),
                           game.xi[player]);
}

LinearProgram BuildIndepDual(const IndependentGame& game, int player,
                             const StrategyProfile& profile) {
  return BuildOccupationDual(game.chains.at(player), Criterion::Average(),
                             ComputeMarginalCosts(game, profile, player),
                             game.xi[player]);
}

namespace {

bool IsPlayerOne(const Game& game, int player) {
  return std::holds_alternative<SingleControllerGame>(game) && player == 0;
}

const ControlledChain& OwnChain(const Game& game, int player) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return sc->chain;
  }
  return std::get<IndependentGame>(game).chains.at(player);
}

Criterion OwnCriterion(const Game& game) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return sc->criterion;
  }
  return Criterion::Average();
}

const Eigen::VectorXd& OwnBounds(const Game& game, int player) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return player == 0 ? sc->xi1 : sc->xi2;
  }
  return std::get<IndependentGame>(game).xi.at(player);
}

}  // namespace

DualVariables DualsFromPrimal(const Game& game, int player,
                              const LpSolution& primal) {
  DualVariables out;
  const Eigen::VectorXd& y = primal.dual;
  if (IsPlayerOne(game, player)) {
    const auto& sc = std::get<SingleControllerGame>(game);
    out.delta = -y.head(sc.n1());
    out.z = y.segment(sc.n1(), sc.num_states());
    return out;
  }
  const int n = OwnChain(game, player).num_states();
  out.u = y.head(n);
  int next = n;
  if (!OwnCriterion(game).discounted()) out.v = y(next++);
  out.delta = -y.tail(y.size() - next);
  return out;
}

namespace {

DualVariables DualsFromDualLp(const Game& game, int player,
                              const Eigen::VectorXd& w) {
  DualVariables out;
  if (IsPlayerOne(game, player)) {
    const auto& sc = std::get<SingleControllerGame>(game);
    out.z = w.head(sc.num_states());
    out.delta = w.tail(sc.n1());
    return out;
  }
  const int n = OwnChain(game, player).num_states();
  int next = 0;
  if (!OwnCriterion(game).discounted()) out.v = w(next++);
  out.u = w.segment(next, n);
  out.delta = w.tail(w.size() - next - n);
  return out;
}

}  // namespace

BestResponseResult BestResponseFromMarginals(const Game& game, int player,
                                             const MarginalCosts& m) {
  BestResponseResult result;
  if (IsPlayerOne(game, player)) {
    const auto& sc = std::get<SingleControllerGame>(game);
    result.primal_lp = BuildP1LpFromMarginals(sc, m);
    result.dual_lp = BuildP1DualFromMarginals(sc, m);
  } else {
    result.primal_lp = BuildOccupationLp(OwnChain(game, player),
                                         OwnCriterion(game), m,
                                         OwnBounds(game, player));
    result.dual_lp = BuildOccupationDual(OwnChain(game, player),
                                         OwnCriterion(game), m,
                                         OwnBounds(game, player));
  }
  result.primal = SolveLp(result.primal_lp);
  if (result.primal.status != LpStatus::kOptimal) {
    std::ostringstream msg;
    msg << "best-response program of player " << player + 1 << " is "
        << LpStatusName(result.primal.status);
    Fail(IsPlayerOne(game, player) ? ErrorCode::kInfeasibleSubscription
                                   : ErrorCode::kInfeasible,
         msg.str());
  }
  result.dual = SolveLp(result.dual_lp);
  if (result.dual.status != LpStatus::kOptimal) {
    Fail(ErrorCode::kNumericalBreakdown,
         std::string("dual best-response program is ") +
             LpStatusName(result.dual.status));
  }
  result.value = result.primal.objective_value;
  const double gap = std::abs(result.value - result.dual.objective_value);
  if (gap > 1e-7 * (1.0 + std::abs(result.value))) {
    std::ostringstream msg;
    msg << "primal and dual best-response values differ by " << gap;
    Fail(ErrorCode::kNumericalBreakdown, msg.str());
  }
  result.dual_vars = DualsFromDualLp(game, player, result.dual.primal);
  result.own_vector = result.primal.primal.cwiseMax(0.0);
  const StateActionIndex index = PlayerIndex(game, player);
  if (IsPlayerOne(game, player)) {
    result.strategy = StationaryStrategy::FromFlat(index, result.own_vector, 1e-8);
  } else {
    result.strategy = RecoverStrategy(index, result.own_vector);
  }
  return result;
}

BestResponseResult BestResponse(const Game& game, int player,
                                const StrategyProfile& profile) {
  if (player < 0 || player >= NumPlayers(game)) {
    Fail(ErrorCode::kInvalidArgument, "player index out of range");
  }
  return BestResponseFromMarginals(game, player,
                                   ComputeMarginalCosts(game, profile, player));
}

}  // namespace csg
