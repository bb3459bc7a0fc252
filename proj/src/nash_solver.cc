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

#include "csg/nash_solver.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "csg/best_response.h"
#include "csg/error.h"
#include "csg/lp.h"
#include "csg/random.h"
#include "csg/validation.h"

namespace csg {
namespace {

constexpr double kFixedPointChange = 1e-10;
constexpr double kOwnFeasibility = 1e-9;

double Slack(const ProgramRow& row, double lhs) {
  return row.relation == Relation::kGreaterEqual ? lhs - row.rhs
                                                 : row.rhs - lhs;
}

// Pairs whose row slack at `point` is at most `slack_tolerance`.
std::vector<bool> PatternAt(const MathProgram& mp, const Eigen::VectorXd& point,
                            double slack_tolerance) {
  std::vector<bool> tight;
  for (const auto& [v, r] : mp.complementary) {
    const ProgramRow& row = mp.rows[r];
    tight.push_back(Slack(row, row.lhs.Evaluate(point)) <= slack_tolerance);
  }
  return tight;
}


bool IsSingleController(const Game& game) {
  return std::holds_alternative<SingleControllerGame>(game);
}

// f for player 1 of a single-controller game, occupation measures otherwise.
std::vector<Eigen::VectorXd> OwnVectors(const Game& game,
                                        const StrategyProfile& profile) {
  std::vector<Eigen::VectorXd> own = OccupationVectors(game, profile);
  if (IsSingleController(game)) own[0] = profile[0].Flat();
  return own;
}

StationaryStrategy FromOwnVector(const Game& game, int player,
                                 const Eigen::VectorXd& own) {
  if (IsSingleController(game) && player == 0) {
    return StationaryStrategy::FromFlat(PlayerIndex(game, 0), own, 1e-8);
  }
  return RecoverStrategy(PlayerIndex(game, player), own);
}

Eigen::VectorXd Concat(const std::vector<Eigen::VectorXd>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Eigen::VectorXd out(n);
  n = 0;
  for (const auto& p : parts) {
    out.segment(n, p.size()) = p;
    n += p.size();
  }
  return out;
}

double MaxAbsDiff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

Eigen::VectorXd ProfileVector(const StrategyProfile& profile) {
  std::vector<Eigen::VectorXd> parts;
  for (const auto& s : profile) parts.push_back(s.Flat());
  return Concat(parts);
}

bool OwnConstraintsHold(const CostReport& costs, int player) {
  for (double slack : costs.slacks[player]) {
    if (slack < -kOwnFeasibility) return false;
  }
  return true;
}

NashCertificate Evaluate(const Game& game, const MathProgram& mp,
                         const StrategyProfile& profile, double gap_epsilon,
                         double feasibility_epsilon, double phi_tolerance) {
  CheckProfile(game, profile);
  NashCertificate cert;
  cert.strategies = profile;
  cert.program = mp.kind;
  cert.costs = ExpectedCosts(game, profile, feasibility_epsilon);
  cert.constraint_violation = std::max(0.0, cert.costs.MaxViolation());
  const int n = NumPlayers(game);
  bool gaps_ok = true;
  cert.epsilon = 0.0;
  for (int i = 0; i < n; ++i) {
    double gap = kInf;
    try {
      const BestResponseResult br = BestResponse(game, i, profile);
      gap = cert.costs.main_costs[i] - br.value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible &&
          e.code() != ErrorCode::kInfeasibleSubscription) {
        throw;
      }
      cert.findings.push_back("player " + std::to_string(i + 1) +
                              ": best-response program infeasible");
    }
    cert.epsilon_gaps.push_back(gap);
    cert.epsilon = std::max(cert.epsilon, gap);
    if (!(gap <= gap_epsilon)) {
      gaps_ok = false;
      std::ostringstream msg;
      msg << "player " << i + 1 << ": best-response gap " << gap
          << " exceeds " << gap_epsilon;
      if (std::isfinite(gap)) cert.findings.push_back(msg.str());
    }
  }
  const bool feasible = cert.constraint_violation <= feasibility_epsilon;
  if (!feasible) {
    for (int i = 0; i < n; ++i) {
      for (size_t k = 0; k < cert.costs.slacks[i].size(); ++k) {
        if (cert.costs.slacks[i][k] < -feasibility_epsilon) {
          std::ostringstream msg;
          msg << "player " << i + 1 << ": constraint " << k + 1
              << " violated by " << -cert.costs.slacks[i][k];
          cert.findings.push_back(msg.str());
        }
      }
    }
  } else {
    try {
      cert.point = MakeFeasiblePoint(mp, game, profile,
                                     std::max(feasibility_epsilon, 1e-8));
      cert.objective_value = EvaluateObjective(mp, cert.point.values);
      cert.residual_max = MaxResidual(cert.point.residuals);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible &&
          e.code() != ErrorCode::kInfeasibleSubscription) {
        throw;
      }
    }
  }
  if (feasible && gaps_ok) {
    const bool certified = cert.objective_value <= phi_tolerance &&
                           cert.residual_max <= kCertifiedResidual &&
                           cert.epsilon <= kCertifiedGap;
    cert.verdict = certified ? Verdict::kCertified : Verdict::kEpsilonOnly;
  }
  return cert;
}

// Lowest objective, then the lexicographically smallest strategy vector.
bool Better(const NashCertificate& a, const NashCertificate& b) {
  if (a.objective_value != b.objective_value) {
    return a.objective_value < b.objective_value;
  }
  if (a.strategies.empty() || b.strategies.empty()) {
    return !a.strategies.empty();
  }
  const Eigen::VectorXd va = ProfileVector(a.strategies);
  const Eigen::VectorXd vb = ProfileVector(b.strategies);
  return std::lexicographical_compare(va.data(), va.data() + va.size(),
                                      vb.data(), vb.data() + vb.size());
}

double CostScale(const MathProgram& mp) {
  double scale = 1.0;
  for (const Term& t : mp.objective.terms) {
    scale = std::max(scale, std::abs(t.coefficient));
  }
  return scale;
}

constexpr double kPatternSchedule[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3,
                                       1e-4, 1e-5, 1e-6, 1e-8};

// Tries the pattern refinement from `profile` and returns the best resulting
// certificate, if any pattern was solvable.
std::optional<NashCertificate> Refine(const Game& game, const MathProgram& mp,
                                      const StrategyProfile& profile,
                                      double phi_tolerance) {
  FeasiblePoint start;
  try {
    start = MakeFeasiblePoint(mp, game, profile, kInf);
  } catch (const Error&) {
    return std::nullopt;
  }
  const double scale = CostScale(mp);
  std::optional<NashCertificate> best;
  for (double tol : kPatternSchedule) {
    const std::optional<Eigen::VectorXd> y =
        SolvePattern(mp, start.values, tol * scale);
    if (!y) continue;
    try {
      NashCertificate cert =
          Evaluate(game, mp, StrategiesFromPoint(mp, game, *y), kInf,
                   kCertifiedResidual, phi_tolerance);
      cert.refined = true;
      if (!best || Better(cert, *best)) best = std::move(cert);
      if (best->verdict == Verdict::kCertified) break;
    } catch (const Error&) {
    }
  }
  return best;
}

// Tries the support patterns in order of Hamming distance from the one of
// `near`, stopping at the first certified equilibrium.
std::optional<NashCertificate> EnumeratePatterns(const Game& game,
                                                 const MathProgram& mp,
                                                 const NashCertificate& near,
                                                 double phi_tolerance) {
  if (near.point.values.size() != mp.num_variables()) return std::nullopt;
  const Eigen::VectorXd& start = near.point.values;
  const int m = static_cast<int>(mp.complementary.size());
  const std::vector<bool> base = PatternAt(mp, start, 1e-9 * CostScale(mp));
  std::uint64_t base_mask = 0;
  for (int k = 0; k < m; ++k) {
    if (base[k]) base_mask |= std::uint64_t{1} << k;
  }
  for (int distance = 0; distance <= m; ++distance) {
    for (std::uint64_t flip = 0; flip < (std::uint64_t{1} << m); ++flip) {
      if (std::popcount(flip) != distance) continue;
      const std::uint64_t mask = base_mask ^ flip;
      std::vector<bool> tight(m);
      for (int k = 0; k < m; ++k) tight[k] = (mask >> k) & 1;
      const std::optional<Eigen::VectorXd> y =
          SolveTightPattern(mp, start, tight);
      if (!y) continue;
      try {
        NashCertificate cert =
            Evaluate(game, mp, StrategiesFromPoint(mp, game, *y), kInf,
                     kCertifiedResidual, phi_tolerance);
        if (cert.verdict == Verdict::kCertified) {
          cert.refined = true;
          cert.restart = near.restart;
          return cert;
        }
      } catch (const Error&) {
      }
    }
  }
  return std::nullopt;
}

struct RestartOutcome {
  bool started = false;
  NashCertificate best;
  int rounds = 0;
};

RestartOutcome RunRestart(const Game& game, const MathProgram& mp,
                          const SolverConfig& config, int restart) {
  RestartOutcome out;
  const int n = NumPlayers(game);
  Rng rng = StreamRng(config.rng_seed, static_cast<std::uint64_t>(restart));
  StrategyProfile profile;
  for (int i = 0; i < n; ++i) {
    profile.push_back(RandomStrategy(rng, PlayerIndex(game, i)));
  }
  // Infeasible draws are replaced by the player's best response to the draw.
  try {
    for (int i = 0; i < n; ++i) {
      const CostReport costs = ExpectedCosts(game, profile);
      if (!OwnConstraintsHold(costs, i)) {
        profile[i] = BestResponse(game, i, profile).strategy;
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInfeasible ||
        e.code() == ErrorCode::kInfeasibleSubscription) {
      return out;
    }
    throw;
  }
  out.started = true;

  std::vector<Eigen::VectorXd> history;
  std::vector<Eigen::VectorXd> own = OwnVectors(game, profile);
  std::vector<Eigen::VectorXd> running = own;
  int running_count = 1;
  StrategyProfile best_iterate = profile;
  double best_iterate_phi = kInf;
  std::optional<std::vector<Eigen::VectorXd>> cycle_average;
  history.push_back(Concat(own));

  for (int round = 0; round < config.max_outer_iterations; ++round) {
    out.rounds = round + 1;
    const CostReport costs = ExpectedCosts(game, profile);
    std::vector<BestResponseResult> brs;
    try {
      for (int i = 0; i < n; ++i) brs.push_back(BestResponse(game, i, profile));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible &&
          e.code() != ErrorCode::kInfeasibleSubscription) {
        throw;
      }
      break;
    }
    bool feasible = true;
    double phi = 0.0, max_gap = 0.0;
    std::vector<bool> keep(n);
    for (int i = 0; i < n; ++i) {
      const double gap = costs.main_costs[i] - brs[i].value;
      const bool own_ok = OwnConstraintsHold(costs, i);
      feasible = feasible && own_ok;
      phi += std::max(gap, 0.0);
      max_gap = std::max(max_gap, gap);
      keep[i] = own_ok && gap <= config.br_improvement_tolerance;
    }
    if (feasible && phi < best_iterate_phi) {
      best_iterate_phi = phi;
      best_iterate = profile;
    }
    if (feasible && max_gap <= config.br_improvement_tolerance) break;

    std::vector<Eigen::VectorXd> next = own;
    StrategyProfile next_profile = profile;
    for (int i = 0; i < n; ++i) {
      if (keep[i]) continue;
      if (config.damping == 0.0) {
        next[i] = brs[i].own_vector;
        next_profile[i] = brs[i].strategy;
      } else {
        next[i] = (1.0 - config.damping) * brs[i].own_vector +
                  config.damping * own[i];
        next_profile[i] = FromOwnVector(game, i, next[i]);
      }
    }
    const Eigen::VectorXd flat = Concat(next);
    if (MaxAbsDiff(flat, history.back()) <= kFixedPointChange) break;
    int repeat = -1;
    for (int j = static_cast<int>(history.size()) - 1; j >= 0; --j) {
      if (MaxAbsDiff(flat, history[j]) <= kFixedPointChange) {
        repeat = j;
        break;
      }
    }
    profile = std::move(next_profile);
    own = std::move(next);
    for (int i = 0; i < n; ++i) running[i] += own[i];
    ++running_count;
    if (repeat >= 0) {
      // The iterates history[repeat..] repeat forever; their average is the
      // natural mixed candidate.
      std::vector<Eigen::VectorXd> avg(n);
      const int len = static_cast<int>(history.size()) - repeat;
      for (int i = 0; i < n; ++i) avg[i] = Eigen::VectorXd::Zero(own[i].size());
      for (int j = repeat; j < static_cast<int>(history.size()); ++j) {
        Eigen::Index at = 0;
        for (int i = 0; i < n; ++i) {
          avg[i] += history[j].segment(at, own[i].size()) / len;
          at += own[i].size();
        }
      }
      cycle_average = std::move(avg);
      break;
    }
    history.push_back(flat);
  }

  std::vector<StrategyProfile> candidates = {best_iterate};
  auto add_average = [&](const std::vector<Eigen::VectorXd>& avg) {
    try {
      StrategyProfile p;
      for (int i = 0; i < n; ++i) p.push_back(FromOwnVector(game, i, avg[i]));
      candidates.push_back(std::move(p));
    } catch (const Error&) {
    }
  };
  if (cycle_average) add_average(*cycle_average);
  if (running_count > 1) {
    std::vector<Eigen::VectorXd> avg = running;
    for (auto& v : avg) v /= running_count;
    add_average(avg);
  }
  bool have = false;
  for (const StrategyProfile& c : candidates) {
    NashCertificate cert;
    try {
      cert = Evaluate(game, mp, c, kInf, kCertifiedResidual,
                      config.phi_tolerance);
    } catch (const Error&) {
      continue;
    }
    if (cert.verdict != Verdict::kCertified && config.refine) {
      std::optional<NashCertificate> refined =
          Refine(game, mp, c, config.phi_tolerance);
      if (refined && Better(*refined, cert)) cert = std::move(*refined);
    }
    if (!have || Better(cert, out.best)) {
      out.best = std::move(cert);
      have = true;
    }
    if (out.best.verdict == Verdict::kCertified) break;
  }
  out.best.restart = restart;
  out.best.rounds = out.rounds;
  return out;
}

// d/dy of a product term at y, one entry per factor position.
void Linearize(const Polynomial& p, const Eigen::VectorXd& y,
               Eigen::VectorXd& gradient, double& value) {
  gradient.setZero(y.size());
  value = 0.0;
  for (const Term& t : p.terms) {
    double prod = t.coefficient;
    for (int v : t.vars) prod *= y(v);
    value += prod;
    for (size_t k = 0; k < t.vars.size(); ++k) {
      double partial = t.coefficient;
      for (size_t j = 0; j < t.vars.size(); ++j) {
        if (j != k) partial *= y(t.vars[j]);
      }
      gradient(t.vars[k]) += partial;
    }
  }
}

}  // namespace

void SolverConfig::Check() const {
  auto bad = [](const std::string& what) {
    Fail(ErrorCode::kInvalidArgument, "solver config: " + what);
  };
  if (max_outer_iterations < 1) bad("max_outer_iterations must be >= 1");
  if (restarts < 1) bad("restarts must be >= 1");
  if (!(phi_tolerance > 0.0)) bad("phi_tolerance must be positive");
  if (!(br_improvement_tolerance > 0.0)) {
    bad("br_improvement_tolerance must be positive");
  }
  if (!(damping >= 0.0 && damping < 1.0)) bad("damping must lie in [0, 1)");
  if (threads < 1) bad("threads must be >= 1");
}

const char* VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCertified:
      return "Certified";
    case Verdict::kEpsilonOnly:
      return "EpsilonOnly";
    case Verdict::kFailed:
      return "Failed";
  }
  return "?";
}

NashCertificate VerifyNash(const Game& game, const StrategyProfile& strategies,
                           double epsilon, double phi_tolerance) {
  if (!(epsilon >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "epsilon must be nonnegative");
  }
  const MathProgram mp = AssembleForGame(game);
  return Evaluate(game, mp, strategies, epsilon, epsilon, phi_tolerance);
}

NashCertificate SolveNash(const Game& game, const SolverConfig& config) {
  config.Check();
  RequireValid(game);
  const MathProgram mp = AssembleForGame(game);
  std::vector<RestartOutcome> outcomes(config.restarts);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int r = next++; r < config.restarts; r = next++) {
      try {
        outcomes[r] = RunRestart(game, mp, config, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(config.threads, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::optional<NashCertificate> best;
  int certified = 0, total_rounds = 0;
  for (RestartOutcome& o : outcomes) {
    if (!o.started) continue;
    total_rounds += o.rounds;
    if (o.best.verdict == Verdict::kCertified) ++certified;
    if (!best || Better(o.best, *best)) best = std::move(o.best);
  }
  if (!best) {
    Fail(ErrorCode::kNoFeasibleStart,
         "no restart produced a start feasible for every player");
  }
  if (best->verdict != Verdict::kCertified && config.refine &&
      static_cast<int>(mp.complementary.size()) <= config.max_enumerated_pairs) {
    std::optional<NashCertificate> found =
        EnumeratePatterns(game, mp, *best, config.phi_tolerance);
    if (found) best = std::move(found);
  }
  best->certified_restarts = certified;
  best->rounds = total_rounds;
  return *best;
}

std::optional<Eigen::VectorXd> SolvePattern(const MathProgram& mp,
                                            const Eigen::VectorXd& start,
                                            double slack_tolerance) {
  if (start.size() != mp.num_variables()) {
    Fail(ErrorCode::kDimensionMismatch, "start point does not match program");
  }
  return SolveTightPattern(mp, start, PatternAt(mp, start, slack_tolerance));
}

std::optional<Eigen::VectorXd> SolveTightPattern(
    const MathProgram& mp, const Eigen::VectorXd& start,
    const std::vector<bool>& pair_tight) {
  const int n = mp.num_variables();
  if (start.size() != n || pair_tight.size() != mp.complementary.size()) {
    Fail(ErrorCode::kDimensionMismatch, "pattern does not match program");
  }
  std::vector<bool> tight(mp.rows.size(), false), zero(n, false);
  for (size_t k = 0; k < mp.complementary.size(); ++k) {
    const auto [v, r] = mp.complementary[k];
    if (pair_tight[k]) {
      tight[r] = true;
    } else {
      zero[v] = true;
    }
  }
  std::vector<int> anchored;
  for (int i = 0; i < n; ++i) {
    const std::string& b = mp.variables[i].block;
    if (b == "f" || b == "x") anchored.push_back(i);
  }
  const bool linear = mp.ConstraintDegree() <= 1;
  Eigen::VectorXd y = start;
  for (int i = 0; i < n; ++i) {
    if (zero[i]) y(i) = 0.0;
  }
  for (int iter = 0; iter < 40; ++iter) {
    LinearProgram lp;
    for (int i = 0; i < n; ++i) {
      const double bound = zero[i] ? 0.0 : kInf;
      lp.AddVariable(mp.variables[i].name, 0.0, zero[i] ? 0.0 : -kInf, bound);
    }
    const int first_aux = n;
    for (int i : anchored) lp.AddVariable("t_" + mp.variables[i].name, 1.0);
    for (size_t r = 0; r < mp.rows.size(); ++r) {
      const ProgramRow& row = mp.rows[r];
      Eigen::VectorXd grad;
      double value;
      Linearize(row.lhs, y, grad, value);
      Eigen::VectorXd a = Eigen::VectorXd::Zero(lp.num_variables());
      a.head(n) = grad;
      lp.AddConstraint(std::move(a), tight[r] ? Relation::kEqual : row.relation,
                       row.rhs - value + grad.dot(y), row.name);
    }
    for (size_t k = 0; k < anchored.size(); ++k) {
      const int i = anchored[k];
      Eigen::VectorXd a = Eigen::VectorXd::Zero(lp.num_variables());
      a(i) = 1.0;
      a(first_aux + k) = -1.0;
      lp.AddConstraint(a, Relation::kLessEqual, start(i));
      a(i) = -1.0;
      lp.AddConstraint(std::move(a), Relation::kLessEqual, -start(i));
    }
    LpSolution sol;
    try {
      sol = SolveLp(lp);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (sol.status != LpStatus::kOptimal) return std::nullopt;
    const Eigen::VectorXd next = sol.primal.head(n);
    const double change = MaxAbsDiff(next, y);
    y = next;
    if (linear || change <= 1e-14 * (1.0 + y.cwiseAbs().maxCoeff())) break;
  }
  for (int i = 0; i < n; ++i) {
    const std::string& b = mp.variables[i].block;
    if (b != "v" && b != "u" && b != "z") y(i) = std::max(0.0, y(i));
  }
  if (MaxResidual(FeasibilityResiduals(mp, y)) > 1e-9) return std::nullopt;
  for (size_t r = 0; r < mp.rows.size(); ++r) {
    if (tight[r] && std::abs(Slack(mp.rows[r], mp.rows[r].lhs.Evaluate(y))) > 1e-9) {
      return std::nullopt;
    }
  }
  return y;
}

std::optional<StrategyProfile> PolishEquilibrium(const Game& game,
                                                 const StrategyProfile& strategies,
                                                 double max_shift) {
  const MathProgram mp = AssembleForGame(game);
  const FeasiblePoint start = MakeFeasiblePoint(mp, game, strategies, kInf);
  const std::vector<Eigen::VectorXd> own0 = OwnVectors(game, strategies);
  const double scale = CostScale(mp);
  std::optional<StrategyProfile> best;
  double best_objective = kInf;
  for (double tol : kPatternSchedule) {
    const std::optional<Eigen::VectorXd> y =
        SolvePattern(mp, start.values, tol * scale);
    if (!y) continue;
    try {
      StrategyProfile candidate = StrategiesFromPoint(mp, game, *y);
      const std::vector<Eigen::VectorXd> own = OwnVectors(game, candidate);
      double shift = 0.0;
      for (size_t i = 0; i < own.size(); ++i) {
        shift = std::max(shift, MaxAbsDiff(own[i], own0[i]));
      }
      if (shift > max_shift) continue;
      const FeasiblePoint point =
          MakeFeasiblePoint(mp, game, candidate, kCertifiedResidual);
      const double objective = EvaluateObjective(mp, point.values);
      if (objective < best_objective) {
        best_objective = objective;
        best = std::move(candidate);
      }
    } catch (const Error&) {
    }
  }
  return best;
}

}  // namespace csg
