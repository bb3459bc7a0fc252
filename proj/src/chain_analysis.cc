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

#include "csg/chain_analysis.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csg/error.h"

namespace csg {

Eigen::MatrixXd TransitionMatrix(const ControlledChain& chain,
                                 const StationaryStrategy& strategy) {
  if (!strategy.Fits(chain.index)) {
    Fail(ErrorCode::kDimensionMismatch,
         "strategy does not match the controlled chain");
  }
  const int n = chain.num_states();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < chain.index.num_actions(s); ++a) {
      P.row(s) += strategy(s, a) *
                  chain.transition[chain.index.Flat(s, a)].transpose();
    }
  }
  return P;
}

Eigen::MatrixXd TransitionMatrix(const SingleControllerGame& game,
                                 const StationaryStrategy& g) {
  return TransitionMatrix(game.chain, g);
}

ChainStructure AnalyzeChain(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  // reach[i][j]: j reachable from i in zero or more steps.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    std::vector<int> stack = {i};
    reach[i][i] = true;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int t = 0; t < n; ++t) {
        if (P(s, t) > 0 && !reach[i][t]) {
          reach[i][t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  ChainStructure out;
  std::vector<bool> assigned(n, false);
  for (int i = 0; i < n; ++i) {
    // i is recurrent iff everything it reaches reaches back.
    bool recurrent = true;
    for (int j = 0; j < n && recurrent; ++j) {
      if (reach[i][j] && !reach[j][i]) recurrent = false;
    }
    if (!recurrent) {
      out.transient_states.push_back(i);
      continue;
    }
    if (assigned[i]) continue;
    std::vector<int> cls;
    for (int j = 0; j < n; ++j) {
      if (reach[i][j]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
    out.recurrent_classes.push_back(std::move(cls));
  }
  return out;
}

Eigen::VectorXd SteadyState(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> rank_lu(A);
  rank_lu.setThreshold(1e-10);
  if (rank_lu.rank() != n - 1) {
    std::ostringstream msg;
    msg << "stationary distribution is not unique (rank " << rank_lu.rank()
        << " of " << n - 1 << ")";
    Fail(ErrorCode::kNotUnichain, msg.str());
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
  if (pi.minCoeff() < -1e-9) {
    Fail(ErrorCode::kNotUnichain, "stationary solution has negative mass");
  }
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  return pi;
}

namespace {

Eigen::VectorXd Spread(const ControlledChain& chain,
                       const StationaryStrategy& strategy,
                       const Eigen::VectorXd& state_mass) {
  Eigen::VectorXd x(chain.index.size());
  for (int s = 0; s < chain.num_states(); ++s) {
    x.segment(chain.index.offset(s), chain.index.num_actions(s)) =
        state_mass(s) * strategy.row(s);
  }
  return x;
}

}  // namespace

OccupationMeasure AverageOccupation(const ControlledChain& chain,
                                    const StationaryStrategy& strategy) {
  const Eigen::VectorXd pi = SteadyState(TransitionMatrix(chain, strategy));
  return {Spread(chain, strategy, pi), Criterion::Average(), {}};
}

OccupationMeasure DiscountedOccupation(const ControlledChain& chain,
                                       const StationaryStrategy& strategy,
                                       const Eigen::VectorXd& gamma,
                                       double beta) {
  if (beta < 0 || beta >= 1) {
    Fail(ErrorCode::kInvalidArgument, "discount factor must lie in [0, 1)");
  }
  const int n = chain.num_states();
  if (gamma.size() != n) {
    Fail(ErrorCode::kDimensionMismatch, "initial distribution has wrong size");
  }
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) -
                            beta * TransitionMatrix(chain, strategy);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M.transpose());
  if (!(lu.rcond() > 1e-14)) {
    Fail(ErrorCode::kSingularResolvent, "I - beta P is numerically singular");
  }
  const Eigen::VectorXd mass = (1.0 - beta) * lu.solve(gamma);
  return {Spread(chain, strategy, mass), Criterion::Discounted(beta), gamma};
}

OccupationMeasure ControllerOccupation(const SingleControllerGame& game,
                                       const StationaryStrategy& g) {
  if (game.criterion.discounted()) {
    return DiscountedOccupation(game.chain, g, game.chain.initial,
                                game.criterion.beta);
  }
  return AverageOccupation(game.chain, g);
}

double MembershipResidual(const ControlledChain& chain,
                          const OccupationMeasure& x) {
  const int n = chain.num_states();
  const double beta = x.kind.discounted() ? x.kind.beta : 1.0;
  Eigen::VectorXd balance = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < chain.index.num_actions(s); ++a) {
      const int k = chain.index.Flat(s, a);
      balance(s) += x.entries(k);
      balance -= beta * chain.transition[k] * x.entries(k);
    }
  }
  if (x.kind.discounted()) balance -= (1.0 - beta) * x.gamma;
  double residual = balance.cwiseAbs().maxCoeff();
  if (!x.kind.discounted()) {
    residual = std::max(residual, std::abs(x.entries.sum() - 1.0));
  }
  return std::max(residual, std::max(0.0, -x.entries.minCoeff()));
}

StationaryStrategy RecoverStrategy(const StateActionIndex& index,
                                   const Eigen::VectorXd& x,
                                   double zero_mass_tolerance) {
  if (x.size() != index.size()) {
    Fail(ErrorCode::kDimensionMismatch, "occupation vector has wrong length");
  }
  std::vector<Eigen::VectorXd> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    const int n = index.num_actions(s);
    Eigen::VectorXd row = x.segment(index.offset(s), n).cwiseMax(0.0);
    const double mass = row.sum();
    if (mass <= zero_mass_tolerance) {
      rows.push_back(Eigen::VectorXd::Constant(n, 1.0 / n));
    } else {
      rows.push_back(row / mass);
    }
  }
  return StationaryStrategy(std::move(rows));
}

MarginalCosts PlayerOneMarginals(const SingleControllerGame& game,
                                 const Eigen::VectorXd& x) {
  MarginalCosts out;
  out.cost.resize(game.index1.size());
  for (int s = 0; s < game.num_states(); ++s) {
    const Eigen::VectorXd xs =
        x.segment(game.index2().offset(s), game.index2().num_actions(s));
    out.cost.segment(game.index1.offset(s), game.index1.num_actions(s)) =
        game.cost1[s] * xs;
  }
  out.constraint = game.d1_sub;
  return out;
}

MarginalCosts PlayerTwoMarginals(const SingleControllerGame& game,
                                 const StationaryStrategy& f) {
  if (!f.Fits(game.index1)) {
    Fail(ErrorCode::kDimensionMismatch, "player 1 strategy has wrong shape");
  }
  const StateActionIndex& k2 = game.index2();
  MarginalCosts out;
  out.cost.resize(k2.size());
  out.constraint.assign(game.n2(), Eigen::VectorXd(k2.size()));
  for (int s = 0; s < game.num_states(); ++s) {
    out.cost.segment(k2.offset(s), k2.num_actions(s)) =
        game.cost2[s].transpose() * f.row(s);
    for (int l = 0; l < game.n2(); ++l) {
      out.constraint[l].segment(k2.offset(s), k2.num_actions(s)) =
          game.d2[l][s].transpose() * f.row(s);
    }
  }
  return out;
}

namespace {

Eigen::VectorXd Marginalize(const IndependentGame& game, int player,
                            const Eigen::VectorXd& tensor,
                            const std::vector<Eigen::VectorXd>& occupations) {
  const JointIndex joint = game.joint();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(joint.size(player));
  for (long k = 0; k < joint.total(); ++k) {
    double weight = tensor(k);
    for (int j = 0; j < joint.num_players() && weight != 0.0; ++j) {
      if (j != player) weight *= occupations[j](joint.Digit(k, j));
    }
    out(joint.Digit(k, player)) += weight;
  }
  return out;
}

void CheckOccupations(const IndependentGame& game, int skip,
                      const std::vector<Eigen::VectorXd>& occupations) {
  if (static_cast<int>(occupations.size()) != game.num_players()) {
    Fail(ErrorCode::kDimensionMismatch, "one occupation vector per player");
  }
  for (int j = 0; j < game.num_players(); ++j) {
    if (j != skip && occupations[j].size() != game.chains[j].index.size()) {
      Fail(ErrorCode::kDimensionMismatch, "occupation vector has wrong length");
    }
  }
}

}  // namespace

MarginalCosts IndependentMarginals(
    const IndependentGame& game, int player,
    const std::vector<Eigen::VectorXd>& occupations) {
  CheckOccupations(game, player, occupations);
  MarginalCosts out;
  out.cost = Marginalize(game, player, game.cost[player], occupations);
  for (const Eigen::VectorXd& d : game.d[player]) {
    out.constraint.push_back(Marginalize(game, player, d, occupations));
  }
  return out;
}

std::vector<Eigen::VectorXd> OccupationVectors(const Game& game,
                                               const StrategyProfile& profile) {
  CheckProfile(game, profile);
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return {Eigen::VectorXd(), ControllerOccupation(*sc, profile[1]).entries};
  }
  const auto& ind = std::get<IndependentGame>(game);
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < ind.num_players(); ++i) {
    out.push_back(AverageOccupation(ind.chains[i], profile[i]).entries);
  }
  return out;
}

MarginalCosts ComputeMarginalCosts(const Game& game,
                                   const StrategyProfile& profile, int player) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    if (player == 0) {
      if (!profile.at(1).Fits(sc->index2())) {
        Fail(ErrorCode::kDimensionMismatch, "player 2 strategy has wrong shape");
      }
      return PlayerOneMarginals(*sc, ControllerOccupation(*sc, profile[1]).entries);
    }
    return PlayerTwoMarginals(*sc, profile.at(0));
  }
  const auto& ind = std::get<IndependentGame>(game);
  if (static_cast<int>(profile.size()) != ind.num_players()) {
    Fail(ErrorCode::kDimensionMismatch, "one strategy per player expected");
  }
  std::vector<Eigen::VectorXd> occupations(ind.num_players());
  for (int j = 0; j < ind.num_players(); ++j) {
    if (j != player) {
      occupations[j] = AverageOccupation(ind.chains[j], profile[j]).entries;
    }
  }
  return IndependentMarginals(ind, player, occupations);
}

double JointExpectation(const IndependentGame& game,
                        const Eigen::VectorXd& tensor,
                        const std::vector<Eigen::VectorXd>& occupations) {
  CheckOccupations(game, -1, occupations);
  const JointIndex joint = game.joint();
  double total = 0.0;
  for (long k = 0; k < joint.total(); ++k) {
    double weight = tensor(k);
    for (int j = 0; j < joint.num_players() && weight != 0.0; ++j) {
      weight *= occupations[j](joint.Digit(k, j));
    }
    total += weight;
  }
  return total;
}

double CostReport::MaxViolation() const {
  double worst = 0.0;
  for (const auto& per_player : slacks) {
    for (double slack : per_player) worst = std::max(worst, -slack);
  }
  return worst;
}

CostReport ExpectedCosts(const Game& game, const StrategyProfile& profile,
                         double bound_tolerance) {
  CheckProfile(game, profile);
  CostReport report;
  std::vector<Eigen::VectorXd> xi;
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    const Eigen::VectorXd x = ControllerOccupation(*sc, profile[1]).entries;
    const MarginalCosts m2 = PlayerTwoMarginals(*sc, profile[0]);
    const MarginalCosts m1 = PlayerOneMarginals(*sc, x);
    const Eigen::VectorXd f = profile[0].Flat();
    report.main_costs = {m1.cost.dot(f), m2.cost.dot(x)};
    report.constraint_costs.resize(2);
    for (const auto& d : sc->d1_sub) report.constraint_costs[0].push_back(d.dot(f));
    for (const auto& d : m2.constraint) report.constraint_costs[1].push_back(d.dot(x));
    xi = {sc->xi1, sc->xi2};
  } else {
    const auto& ind = std::get<IndependentGame>(game);
    const std::vector<Eigen::VectorXd> x = OccupationVectors(game, profile);
    report.constraint_costs.resize(ind.num_players());
    for (int i = 0; i < ind.num_players(); ++i) {
      report.main_costs.push_back(JointExpectation(ind, ind.cost[i], x));
      for (const auto& d : ind.d[i]) {
        report.constraint_costs[i].push_back(JointExpectation(ind, d, x));
      }
      xi.push_back(ind.xi[i]);
    }
  }
  for (size_t i = 0; i < xi.size(); ++i) {
    report.slacks.emplace_back();
    report.bounds_satisfied.emplace_back();
    for (size_t k = 0; k < report.constraint_costs[i].size(); ++k) {
      const double slack = xi[i](k) - report.constraint_costs[i][k];
      report.slacks[i].push_back(slack);
      report.bounds_satisfied[i].push_back(slack >= -bound_tolerance);
    }
  }
  return report;
}

}  // namespace csg
