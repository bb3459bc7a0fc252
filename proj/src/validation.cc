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

#include "csg/validation.h"

#include <cmath>
#include <set>
#include <sstream>

#include "csg/chain_analysis.h"
#include "csg/lp.h"
#include "csg/random.h"

namespace csg {

const char* SlaterStatusName(SlaterStatus status) {
  switch (status) {
    case SlaterStatus::kPass:
      return "pass";
    case SlaterStatus::kFail:
      return "fail";
    case SlaterStatus::kUnknown:
      return "unknown";
  }
  return "?";
}

namespace {

constexpr double kErrorTolerance = 1e-9;
constexpr double kWarnTolerance = 1e-12;

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void Error(ErrorCode code, const std::string& message) {
    report_.errors.push_back({code, message});
  }

  void Warn(const std::string& message) { report_.warnings.push_back(message); }

  void Distribution(const Eigen::VectorXd& p, int size,
                    const std::string& what) {
    if (p.size() != size) {
      Error(ErrorCode::kInvalidGame, what + " has wrong length");
      return;
    }
    if (!p.allFinite()) {
      Error(ErrorCode::kInvalidGame, what + " has non-finite entries");
      return;
    }
    if (size > 0 && p.minCoeff() < 0) {
      Error(ErrorCode::kNegativeProbability, what + " has a negative entry");
    }
    const double off = std::abs(p.sum() - 1.0);
    std::ostringstream msg;
    msg << what << " sums to 1 only within " << off;
    if (off > kErrorTolerance) {
      Error(ErrorCode::kStochasticity, msg.str());
    } else if (off > kWarnTolerance) {
      Warn(msg.str());
    }
  }

  void Chain(const ControlledChain& chain, const std::string& owner) {
    const int n = chain.index.num_states();
    if (n < 1) {
      Error(ErrorCode::kInvalidGame, owner + ": chain has no states");
      return;
    }
    if (static_cast<int>(chain.state_ids.size()) != n ||
        static_cast<int>(chain.action_ids.size()) != n) {
      Error(ErrorCode::kInvalidGame, owner + ": id lists disagree with index");
    } else {
      for (int s = 0; s < n; ++s) {
        if (static_cast<int>(chain.action_ids[s].size()) !=
            chain.index.num_actions(s)) {
          Error(ErrorCode::kInvalidGame, owner + ": action ids disagree");
        }
      }
    }
    if (static_cast<int>(chain.transition.size()) != chain.index.size()) {
      Error(ErrorCode::kInvalidGame, owner + ": transition table has wrong size");
      return;
    }
    for (int k = 0; k < chain.index.size(); ++k) {
      auto [s, a] = chain.index.Unflat(k);
      std::ostringstream what;
      what << owner << ": p(.|" << s + 1 << "," << a + 1 << ")";
      Distribution(chain.transition[k], n, what.str());
    }
    Distribution(chain.initial, n, owner + ": initial distribution");
  }

  void Vector(const Eigen::VectorXd& v, long size, const std::string& what) {
    if (v.size() != size) {
      Error(ErrorCode::kInvalidGame, what + " has wrong length");
    } else if (!v.allFinite()) {
      Error(ErrorCode::kInvalidGame, what + " has non-finite entries");
    }
  }

  void Matrix(const Eigen::MatrixXd& m, int rows, int cols,
              const std::string& what) {
    if (m.rows() != rows || m.cols() != cols) {
      Error(ErrorCode::kInvalidGame, what + " has wrong shape");
    } else if (!m.allFinite()) {
      Error(ErrorCode::kInvalidGame, what + " has non-finite entries");
    }
  }

 private:
  ValidationReport& report_;
};

void CheckStructure(const SingleControllerGame& g, Checker& check) {
  check.Chain(g.chain, "player 2");
  const int n = g.num_states();
  if (g.index1.num_states() != n ||
      static_cast<int>(g.actions1.size()) != n) {
    check.Error(ErrorCode::kInvalidGame, "player 1 action table has wrong size");
    return;
  }
  auto tensor = [&](const std::vector<Eigen::MatrixXd>& t,
                    const std::string& what) {
    if (static_cast<int>(t.size()) != n) {
      check.Error(ErrorCode::kInvalidGame, what + " has wrong state count");
      return;
    }
    for (int s = 0; s < n; ++s) {
      check.Matrix(t[s], g.index1.num_actions(s), g.index2().num_actions(s),
                   what);
    }
  };
  tensor(g.cost1, "cost1");
  tensor(g.cost2, "cost2");
  for (const auto& d : g.d2) tensor(d, "d2");
  for (const auto& d : g.d1_sub) check.Vector(d, g.index1.size(), "d1_sub");
  check.Vector(g.xi1, g.n1(), "xi1");
  check.Vector(g.xi2, g.n2(), "xi2");
  if (g.criterion.discounted() &&
      !(g.criterion.beta >= 0 && g.criterion.beta < 1)) {
    check.Error(ErrorCode::kInvalidGame, "discount factor outside [0, 1)");
  }
}

void CheckStructure(const IndependentGame& g, Checker& check) {
  if (g.num_players() < 1) {
    check.Error(ErrorCode::kInvalidGame, "no players");
    return;
  }
  for (int i = 0; i < g.num_players(); ++i) {
    check.Chain(g.chains[i], "player " + std::to_string(i + 1));
  }
  const long total = g.joint().total();
  if (static_cast<int>(g.cost.size()) != g.num_players() ||
      static_cast<int>(g.d.size()) != g.num_players() ||
      static_cast<int>(g.xi.size()) != g.num_players()) {
    check.Error(ErrorCode::kInvalidGame, "per-player tables have wrong count");
    return;
  }
  for (int i = 0; i < g.num_players(); ++i) {
    check.Vector(g.cost[i], total, "cost");
    check.Vector(g.xi[i], static_cast<long>(g.d[i].size()), "xi");
    for (const auto& d : g.d[i]) check.Vector(d, total, "d");
  }
}

// Deterministic strategies of one chain: all of them when few, otherwise a
// seeded sample.
std::vector<std::vector<int>> DeterministicStrategies(
    const StateActionIndex& index, const ValidationOptions& options, Rng& rng,
    bool* exhaustive) {
  double count = 1.0;
  for (int s = 0; s < index.num_states(); ++s) count *= index.num_actions(s);
  std::vector<std::vector<int>> out;
  if (count <= options.max_enumeration) {
    std::vector<int> digits(index.num_states(), 0);
    while (true) {
      out.push_back(digits);
      int s = index.num_states() - 1;
      while (s >= 0 && ++digits[s] == index.num_actions(s)) digits[s--] = 0;
      if (s < 0) break;
    }
    return out;
  }
  *exhaustive = false;
  for (int t = 0; t < options.samples; ++t) {
    std::vector<int> digits(index.num_states());
    for (int s = 0; s < index.num_states(); ++s) {
      digits[s] = UniformInt(rng, index.num_actions(s));
    }
    out.push_back(std::move(digits));
  }
  return out;
}

void ProbeChain(const ControlledChain& chain, int player, bool required,
                const ValidationOptions& options, Rng& rng,
                ValidationReport& report, Checker& check) {
  bool exhaustive = true;
  const auto strategies =
      DeterministicStrategies(chain.index, options, rng, &exhaustive);
  if (!exhaustive) report.unichain_exhaustive = false;
  std::set<int> transient;
  int failures = 0;
  for (const auto& actions : strategies) {
    const StationaryStrategy g =
        StationaryStrategy::Deterministic(chain.index, actions);
    const ChainStructure structure =
        AnalyzeChain(TransitionMatrix(chain, g));
    report.unichain_probe.push_back({player, actions, structure.unichain()});
    if (!structure.unichain()) ++failures;
    transient.insert(structure.transient_states.begin(),
                     structure.transient_states.end());
  }
  const std::string owner = "player " + std::to_string(player + 1) + " chain";
  if (failures > 0) {
    std::ostringstream msg;
    msg << owner << ": " << failures << " of " << strategies.size()
        << " probed deterministic strategies give several recurrent classes";
    if (required) {
      check.Error(ErrorCode::kNotUnichain, msg.str());
    } else {
      check.Warn(msg.str());
    }
  }
  for (int s : transient) {
    check.Warn(owner + ": state " + chain.state_ids[s] +
               " transient under some strategies");
  }
}

bool SubscriptionFeasible(const SingleControllerGame& g) {
  if (g.n1() == 0) return true;
  LinearProgram lp;
  for (int k = 0; k < g.index1.size(); ++k) lp.AddVariable("f");
  for (int k = 0; k < g.n1(); ++k) {
    lp.AddConstraint(g.d1_sub[k], Relation::kLessEqual, g.xi1(k));
  }
  for (int s = 0; s < g.num_states(); ++s) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(g.index1.size());
    row.segment(g.index1.offset(s), g.index1.num_actions(s)).setOnes();
    lp.AddConstraint(row, Relation::kEqual, 1.0);
  }
  return SolveLp(lp).status == LpStatus::kOptimal;
}

std::vector<StationaryStrategy> SlaterCandidates(
    const StateActionIndex& index, const ValidationOptions& options, Rng& rng,
    bool* exhaustive) {
  std::vector<StationaryStrategy> out;
  for (const auto& actions :
       DeterministicStrategies(index, options, rng, exhaustive)) {
    out.push_back(StationaryStrategy::Deterministic(index, actions));
  }
  for (int t = 0; t < options.slater_random_candidates; ++t) {
    out.push_back(RandomStrategy(rng, index));
  }
  return out;
}

SlaterStatus SlaterSingleController(const SingleControllerGame& g,
                                    const ValidationOptions& options,
                                    Rng& rng) {
  if (g.n2() == 0) return SlaterStatus::kPass;
  bool exhaustive = true;
  for (const StationaryStrategy& candidate :
       SlaterCandidates(g.index2(), options, rng, &exhaustive)) {
    Eigen::VectorXd x;
    try {
      x = ControllerOccupation(g, candidate).entries;
    } catch (const Error&) {
      continue;
    }
    bool strict = true;
    for (int l = 0; l < g.n2() && strict; ++l) {
      // The worst f picks the costliest a1 in every state.
      double sup = 0.0;
      for (int s = 0; s < g.num_states(); ++s) {
        const Eigen::VectorXd xs =
            x.segment(g.index2().offset(s), g.index2().num_actions(s));
        sup += (g.d2[l][s] * xs).maxCoeff();
      }
      strict = sup < g.xi2(l);
    }
    if (strict) return SlaterStatus::kPass;
  }
  return SlaterStatus::kUnknown;
}

SlaterStatus SlaterIndependent(const IndependentGame& g,
                               const ValidationOptions& options, Rng& rng) {
  const int n = g.num_players();
  // Occupations of every deterministic strategy, per player.
  std::vector<std::vector<Eigen::VectorXd>> vertices(n);
  for (int j = 0; j < n; ++j) {
    bool exhaustive = true;
    for (const auto& actions : DeterministicStrategies(
             g.chains[j].index, options, rng, &exhaustive)) {
      try {
        vertices[j].push_back(
            AverageOccupation(g.chains[j],
                              StationaryStrategy::Deterministic(
                                  g.chains[j].index, actions))
                .entries);
      } catch (const Error&) {
        return SlaterStatus::kUnknown;
      }
    }
    if (!exhaustive) return SlaterStatus::kUnknown;
  }
  for (int i = 0; i < n; ++i) {
    if (g.num_constraints(i) == 0) continue;
    double profiles = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) profiles *= vertices[j].size();
    }
    if (profiles > options.max_enumeration) return SlaterStatus::kUnknown;
    bool exhaustive = true;
    bool found = false;
    for (const StationaryStrategy& candidate :
         SlaterCandidates(g.chains[i].index, options, rng, &exhaustive)) {
      std::vector<Eigen::VectorXd> occ(n);
      try {
        occ[i] = AverageOccupation(g.chains[i], candidate).entries;
      } catch (const Error&) {
        continue;
      }
      Eigen::VectorXd sup = Eigen::VectorXd::Constant(g.num_constraints(i), -kInf);
      std::vector<size_t> digit(n, 0);
      while (true) {
        for (int j = 0; j < n; ++j) {
          if (j != i) occ[j] = vertices[j][digit[j]];
        }
        for (int k = 0; k < g.num_constraints(i); ++k) {
          sup(k) = std::max(sup(k), JointExpectation(g, g.d[i][k], occ));
        }
        int j = n - 1;
        while (j >= 0) {
          if (j != i && ++digit[j] < vertices[j].size()) break;
          digit[j] = 0;
          --j;
        }
        if (j < 0) break;
      }
      if ((sup - g.xi[i]).maxCoeff() < 0) {
        found = true;
        break;
      }
    }
    if (!found) return SlaterStatus::kUnknown;
  }
  return SlaterStatus::kPass;
}

}  // namespace

ValidationReport Validate(const Game& game, const ValidationOptions& options) {
  ValidationReport report;
  report.probe_seed = options.seed;
  Checker check(report);
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    CheckStructure(*sc, check);
  } else {
    CheckStructure(std::get<IndependentGame>(game), check);
  }
  if (!report.ok()) return report;

  Rng rng(options.seed);
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    ProbeChain(sc->chain, 1, !sc->criterion.discounted(), options, rng, report,
               check);
    if (!SubscriptionFeasible(*sc)) {
      check.Error(ErrorCode::kInfeasibleSubscription,
                  "no player 1 strategy meets the subscription bounds");
    }
    report.slater_probe = SlaterSingleController(*sc, options, rng);
  } else {
    const auto& ind = std::get<IndependentGame>(game);
    for (int i = 0; i < ind.num_players(); ++i) {
      ProbeChain(ind.chains[i], i, true, options, rng, report, check);
    }
    if (report.ok()) report.slater_probe = SlaterIndependent(ind, options, rng);
  }
  if (report.slater_probe != SlaterStatus::kPass) {
    check.Warn("strong Slater condition could not be confirmed by probing");
  }
  return report;
}

void RequireValid(const Game& game) {
  const ValidationReport report = Validate(game);
  if (!report.ok()) {
    Fail(report.errors.front().code, report.errors.front().message);
  }
}

}  // namespace csg
