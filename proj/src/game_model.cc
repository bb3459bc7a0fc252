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

#include "csg/game_model.h"

#include <cmath>
#include <sstream>

#include "csg/error.h"

namespace csg {

StateActionIndex::StateActionIndex(std::vector<int> actions_per_state)
    : counts_(std::move(actions_per_state)) {
  offsets_.reserve(counts_.size());
  for (int count : counts_) {
    if (count < 1) Fail(ErrorCode::kInvalidGame, "state without actions");
    offsets_.push_back(size_);
    size_ += count;
  }
}

std::pair<int, int> StateActionIndex::Unflat(int flat) const {
  for (int s = num_states() - 1; s >= 0; --s) {
    if (flat >= offsets_[s]) return {s, flat - offsets_[s]};
  }
  Fail(ErrorCode::kDimensionMismatch, "flat pair index out of range");
}

JointIndex::JointIndex(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  strides_.assign(sizes_.size(), 1);
  total_ = 1;
  for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
    strides_[i] = total_;
    total_ *= sizes_[i];
  }
}

JointIndex IndependentGame::joint() const {
  std::vector<int> sizes;
  for (const ControlledChain& chain : chains) sizes.push_back(chain.index.size());
  return JointIndex(std::move(sizes));
}

StationaryStrategy::StationaryStrategy(std::vector<Eigen::VectorXd> rows,
                                       double accept_tolerance)
    : rows_(std::move(rows)) {
  for (size_t s = 0; s < rows_.size(); ++s) {
    Eigen::VectorXd& row = rows_[s];
    if (row.size() == 0) {
      Fail(ErrorCode::kInvalidStrategy, "empty strategy row");
    }
    for (int a = 0; a < row.size(); ++a) {
      if (!std::isfinite(row(a)) || row(a) < -accept_tolerance) {
        std::ostringstream msg;
        msg << "negative or non-finite probability at state " << s
            << ", action " << a;
        Fail(ErrorCode::kInvalidStrategy, msg.str());
      }
      if (row(a) < 0) row(a) = 0;
    }
    const double sum = row.sum();
    if (std::abs(sum - 1.0) > accept_tolerance) {
      std::ostringstream msg;
      msg << "strategy row " << s << " sums to " << sum;
      Fail(ErrorCode::kInvalidStrategy, msg.str());
    }
    row /= sum;
  }
}

StationaryStrategy StationaryStrategy::Uniform(const StateActionIndex& index) {
  std::vector<Eigen::VectorXd> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    const int n = index.num_actions(s);
    rows.push_back(Eigen::VectorXd::Constant(n, 1.0 / n));
  }
  return StationaryStrategy(std::move(rows));
}

StationaryStrategy StationaryStrategy::Deterministic(
    const StateActionIndex& index, std::span<const int> actions) {
  if (static_cast<int>(actions.size()) != index.num_states()) {
    Fail(ErrorCode::kDimensionMismatch, "one action per state expected");
  }
  std::vector<Eigen::VectorXd> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    if (actions[s] < 0 || actions[s] >= index.num_actions(s)) {
      Fail(ErrorCode::kInvalidStrategy, "action index out of range");
    }
    Eigen::VectorXd row = Eigen::VectorXd::Zero(index.num_actions(s));
    row(actions[s]) = 1.0;
    rows.push_back(std::move(row));
  }
  return StationaryStrategy(std::move(rows));
}

StationaryStrategy StationaryStrategy::FromRows(
    const std::vector<std::vector<double>>& rows, double accept_tolerance) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& r : rows) {
    out.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
  }
  return StationaryStrategy(std::move(out), accept_tolerance);
}

StationaryStrategy StationaryStrategy::FromFlat(const StateActionIndex& index,
                                                const Eigen::VectorXd& flat,
                                                double accept_tolerance) {
  if (flat.size() != index.size()) {
    Fail(ErrorCode::kDimensionMismatch, "flat strategy has wrong length");
  }
  std::vector<Eigen::VectorXd> rows;
  for (int s = 0; s < index.num_states(); ++s) {
    rows.push_back(flat.segment(index.offset(s), index.num_actions(s)));
  }
  return StationaryStrategy(std::move(rows), accept_tolerance);
}

Eigen::VectorXd StationaryStrategy::Flat() const {
  int n = 0;
  for (const auto& row : rows_) n += static_cast<int>(row.size());
  Eigen::VectorXd out(n);
  int k = 0;
  for (const auto& row : rows_) {
    out.segment(k, row.size()) = row;
    k += static_cast<int>(row.size());
  }
  return out;
}

bool StationaryStrategy::Fits(const StateActionIndex& index) const {
  if (num_states() != index.num_states()) return false;
  for (int s = 0; s < num_states(); ++s) {
    if (rows_[s].size() != index.num_actions(s)) return false;
  }
  return true;
}

int NumPlayers(const Game& game) {
  if (std::holds_alternative<SingleControllerGame>(game)) return 2;
  return std::get<IndependentGame>(game).num_players();
}

StateActionIndex PlayerIndex(const Game& game, int player) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    if (player == 0) return sc->index1;
    if (player == 1) return sc->index2();
  } else {
    const auto& ind = std::get<IndependentGame>(game);
    if (player >= 0 && player < ind.num_players()) {
      return ind.chains[player].index;
    }
  }
  Fail(ErrorCode::kInvalidArgument, "player index out of range");
}

void CheckProfile(const Game& game, const StrategyProfile& profile) {
  const int n = NumPlayers(game);
  if (static_cast<int>(profile.size()) != n) {
    std::ostringstream msg;
    msg << "expected " << n << " strategies, got " << profile.size();
    Fail(ErrorCode::kDimensionMismatch, msg.str());
  }
  for (int i = 0; i < n; ++i) {
    if (!profile[i].Fits(PlayerIndex(game, i))) {
      std::ostringstream msg;
      msg << "strategy of player " << i + 1 << " does not match the game";
      Fail(ErrorCode::kDimensionMismatch, msg.str());
    }
  }
}

}  // namespace csg
