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

#ifndef CSG_GAME_MODEL_H_
#define CSG_GAME_MODEL_H_

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace csg {

// Flat enumeration of the (state, action) pairs of one player, with a stored
// offset per state. Every LP builder addresses variables through this table.
class StateActionIndex {
 public:
  StateActionIndex() = default;
  explicit StateActionIndex(std::vector<int> actions_per_state);

  int num_states() const { return static_cast<int>(counts_.size()); }
  int num_actions(int state) const { return counts_[state]; }
  int offset(int state) const { return offsets_[state]; }
  int size() const { return size_; }

  int Flat(int state, int action) const { return offsets_[state] + action; }
  // Inverse of Flat().
  std::pair<int, int> Unflat(int flat) const;

  bool operator==(const StateActionIndex& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::vector<int> counts_;
  std::vector<int> offsets_;
  int size_ = 0;
};

struct Criterion {
  enum class Type { kAverage, kDiscounted };

  Type type = Type::kAverage;
  double beta = 0.0;  // only meaningful when discounted

  static Criterion Average() { return {Type::kAverage, 0.0}; }
  static Criterion Discounted(double beta) { return {Type::kDiscounted, beta}; }

  bool discounted() const { return type == Type::kDiscounted; }
  bool operator==(const Criterion&) const = default;
};

// A Markov chain controlled by a single decision maker: states, per-state
// actions, p(.|s,a) for every flat pair, and the initial distribution.
struct ControlledChain {
  std::vector<std::string> state_ids;
  std::vector<std::vector<std::string>> action_ids;
  StateActionIndex index;
  std::vector<Eigen::VectorXd> transition;  // [flat pair] -> distribution
  Eigen::VectorXd initial;

  int num_states() const { return index.num_states(); }
};

// Two-player game in which only player 2 moves the state. Player 1 carries
// subscription constraints, player 2 realization constraints.
struct SingleControllerGame {
  ControlledChain chain;  // states, A2(s), p(s'|s,a2), gamma
  std::vector<std::vector<std::string>> actions1;
  StateActionIndex index1;

  // Per state, |A1(s)| x |A2(s)|.
  std::vector<Eigen::MatrixXd> cost1;
  std::vector<Eigen::MatrixXd> cost2;
  std::vector<std::vector<Eigen::MatrixXd>> d2;  // [l][s]
  std::vector<Eigen::VectorXd> d1_sub;           // [k], over flat K1
  Eigen::VectorXd xi1;
  Eigen::VectorXd xi2;
  Criterion criterion;

  const StateActionIndex& index2() const { return chain.index; }
  int num_states() const { return chain.num_states(); }
  int n1() const { return static_cast<int>(d1_sub.size()); }
  int n2() const { return static_cast<int>(d2.size()); }
};

// Mixed-radix addressing of the joint pair space K = K^1 x ... x K^N; player
// 0 is the most significant digit.
class JointIndex {
 public:
  JointIndex() = default;
  explicit JointIndex(std::vector<int> sizes);

  int num_players() const { return static_cast<int>(sizes_.size()); }
  int size(int player) const { return sizes_[player]; }
  long total() const { return total_; }
  long stride(int player) const { return strides_[player]; }
  int Digit(long joint, int player) const {
    return static_cast<int>((joint / strides_[player]) % sizes_[player]);
  }

 private:
  std::vector<int> sizes_;
  std::vector<long> strides_;
  long total_ = 0;
};

// N players, each controlling an own chain; costs couple them through the
// joint pair space.
struct IndependentGame {
  std::vector<ControlledChain> chains;
  std::vector<Eigen::VectorXd> cost;             // [i] over joint K
  std::vector<std::vector<Eigen::VectorXd>> d;   // [i][k] over joint K
  std::vector<Eigen::VectorXd> xi;               // [i]

  int num_players() const { return static_cast<int>(chains.size()); }
  int num_constraints(int player) const {
    return static_cast<int>(d[player].size());
  }
  JointIndex joint() const;
};

using Game = std::variant<SingleControllerGame, IndependentGame>;

// Per-state randomization over that state's actions. Construction enforces
// nonnegativity and unit row sums (1e-12).
class StationaryStrategy {
 public:
  static constexpr double kRowTolerance = 1e-12;

  StationaryStrategy() = default;
  // Rows within `accept_tolerance` of a distribution are renormalized; rows
  // further off throw InvalidStrategy.
  explicit StationaryStrategy(std::vector<Eigen::VectorXd> rows,
                              double accept_tolerance = kRowTolerance);

  static StationaryStrategy Uniform(const StateActionIndex& index);
  static StationaryStrategy Deterministic(const StateActionIndex& index,
                                          std::span<const int> actions);
  static StationaryStrategy FromRows(
      const std::vector<std::vector<double>>& rows,
      double accept_tolerance = kRowTolerance);
  static StationaryStrategy FromFlat(const StateActionIndex& index,
                                     const Eigen::VectorXd& flat,
                                     double accept_tolerance = kRowTolerance);

  int num_states() const { return static_cast<int>(rows_.size()); }
  const Eigen::VectorXd& row(int state) const { return rows_[state]; }
  double operator()(int state, int action) const {
    return rows_[state](action);
  }
  const std::vector<Eigen::VectorXd>& rows() const { return rows_; }

  Eigen::VectorXd Flat() const;
  bool Fits(const StateActionIndex& index) const;

 private:
  std::vector<Eigen::VectorXd> rows_;
};

// Player order: SingleControllerGame -> {f, g}; IndependentGame -> {f^1..f^N}.
using StrategyProfile = std::vector<StationaryStrategy>;

int NumPlayers(const Game& game);
// The pair table of each player's own decision variables.
StateActionIndex PlayerIndex(const Game& game, int player);
// Throws DimensionMismatch unless `profile` fits `game`.
void CheckProfile(const Game& game, const StrategyProfile& profile);

}  // namespace csg

#endif  // CSG_GAME_MODEL_H_
