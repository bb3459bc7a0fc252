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


// Runs the acceptance criteria at their pinned tolerances and prints one
// line per criterion. Exit status is nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "csg/builtin_examples.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"
#include "csg/grid_oracle.h"
#include "csg/lp.h"
#include "csg/monte_carlo.h"
#include "csg/nash_solver.h"
#include "csg/programs.h"
#include "csg/random.h"
#include "csg/zero_sum.h"
#include "test_support.h"

namespace csg {
namespace {

// Collects the failed checks of one criterion.
class Criterion {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void Note(const std::string& note) { notes_.push_back(note); }
  void Near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << actual << ", expected " << expected << " +- " << tol;
    Expect(std::abs(actual - expected) <= tol, s.str());
  }
  void AtMost(double actual, double bound, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << actual << " exceeds " << bound;
    Expect(actual <= bound, s.str());
  }

  bool failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

double Objective(const Game& game, const StrategyProfile& profile,
                 double tolerance = 1e-8) {
  const MathProgram mp = AssembleForGame(game);
  return EvaluateObjective(mp,
                           MakeFeasiblePoint(mp, game, profile, tolerance).values);
}

std::string Str(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// Four-decimal reference equilibrium of a single-controller example.
void ReproduceSingleController(Criterion& c, const std::string& name,
                               double cost1, double cost2) {
  const Game game = BuiltinExample(name);
  const StrategyProfile rounded = testing::ReferenceEquilibrium(name);
  const NashCertificate cert = VerifyNash(game, rounded, 1e-3);
  c.Expect(cert.verdict != Verdict::kFailed,
           "rounded point fails verification: " +
               (cert.findings.empty() ? std::string() : cert.findings[0]));
  c.AtMost(cert.epsilon, 1e-3, "best-response gap at the reference point");
  const CostReport costs = ExpectedCosts(game, rounded, kInf);
  c.Near(costs.main_costs[0], cost1, 1e-3, "player 1 cost");
  c.Near(costs.main_costs[1], cost2, 1e-3, "player 2 cost");
  // Four-decimal rounding leaves the reference point slightly infeasible.
  const double raw = Objective(game, rounded, 1e-4);
  c.Note("Phi at the four-decimal point " + Str(raw));
  const auto exact = PolishEquilibrium(game, rounded);
  c.Expect(exact.has_value(), "no exact equilibrium within 1e-3 of the reference point");
  if (exact) {
    const double phi = Objective(game, *exact);
    c.AtMost(phi, 1e-6, "Phi at the polished point");
    c.Note("Phi after polishing " + Str(phi));
  }
}

void Ac1(Criterion& c) { ReproduceSingleController(c, "sc-average", 4.4268, 3.0279); }

void Ac2(Criterion& c) {
  const auto g = std::get<SingleControllerGame>(BuiltinExample("sc-discounted"));
  c.Near(g.criterion.beta, 0.5, 0.0, "beta");
  c.AtMost((g.chain.initial - Eigen::Vector2d(0.5, 0.5)).cwiseAbs().maxCoeff(), 0.0,
           "gamma deviation");
  ReproduceSingleController(c, "sc-discounted", 4.2082, 2.9166);
}

void Ac3(Criterion& c) {
  const Game game = BuiltinExample("indep-2p");
  const auto& g = std::get<IndependentGame>(game);
  double worst_psi = 0.0;
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const std::string tag = "alpha " + Str(alpha) + ": ";
    const StrategyProfile p = testing::ReferenceEquilibrium("indep-2p", alpha);
    const NashCertificate cert = VerifyNash(game, p, 1e-3);
    c.Expect(cert.verdict != Verdict::kFailed, tag + "verification failed");
    c.AtMost(cert.epsilon, 1e-3, tag + "best-response gap");
    const CostReport costs = ExpectedCosts(game, p, kInf);
    c.Near(costs.main_costs[0], 1.2941, 1e-3, tag + "player 1 cost");
    c.Near(costs.main_costs[1], 1.7059, 1e-3, tag + "player 2 cost");
    const Eigen::VectorXd x2 = AverageOccupation(g.chains[1], p[1]).entries;
    c.AtMost((x2 - Eigen::Vector4d(0.0, 0.2941, 0.7059, 0.0)).cwiseAbs().maxCoeff(),
             1e-3, tag + "x2 deviation");
    const double psi = Objective(game, p);
    c.AtMost(psi, 1e-6, tag + "psi");
    worst_psi = std::max(worst_psi, psi);
  }
  c.Note("largest psi " + Str(worst_psi));
}

void Ac4(Criterion& c) {
  for (const std::string& name : BuiltinExampleNames()) {
    const NashCertificate cert = SolveNash(BuiltinExample(name));
    c.Expect(cert.verdict == Verdict::kCertified,
             name + ": verdict " + VerdictName(cert.verdict));
    c.AtMost(cert.objective_value, 1e-6, name + " objective");
    c.AtMost(cert.residual_max, kCertifiedResidual, name + " residual");
    c.AtMost(cert.epsilon, kCertifiedGap, name + " gap");
  }
}

void Ac5(Criterion& c) {
  Rng rng(5005);
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    const MathProgram mp = AssembleForGame(game);
    int draws = 0, attempts = 0, near_zero = 0;
    double lowest = kInf;
    auto check_sound = [&](const Eigen::VectorXd& point, const std::string& what) {
      const NashCertificate cert =
          VerifyNash(game, StrategiesFromPoint(mp, game, point), 1e-5);
      c.Expect(cert.verdict != Verdict::kFailed && cert.epsilon <= 1e-5,
               name + ": " + what + " with objective <= 1e-6 is not a 1e-5 equilibrium");
    };
    while (draws < 1000 && attempts < 100000) {
      ++attempts;
      const auto profile = testing::FeasibleRandomProfile(game, rng);
      if (!profile) continue;
      ++draws;
      const FeasiblePoint point = MakeFeasiblePoint(mp, game, *profile);
      const double phi = EvaluateObjective(mp, point.values);
      lowest = std::min(lowest, phi);
      if (phi <= 1e-6) {
        ++near_zero;
        check_sound(point.values, "random draw");
      }
    }
    c.Expect(draws == 1000, name + ": only " + std::to_string(draws) + " feasible draws");
    c.Expect(lowest >= -1e-9, name + ": objective " + Str(lowest) + " below -1e-9");

    // Known equilibria: the solver output and the exact reference points.
    std::vector<StrategyProfile> equilibria = {SolveNash(game).strategies};
    if (name == "indep-2p") {
      for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        equilibria.push_back(testing::ReferenceEquilibrium(name, alpha));
      }
    } else if (auto exact = PolishEquilibrium(game, testing::ReferenceEquilibrium(name))) {
      equilibria.push_back(*exact);
    }
    int verified = 0;
    for (const StrategyProfile& p : equilibria) {
      const NashCertificate cert = VerifyNash(game, p, 1e-8);
      if (cert.verdict == Verdict::kFailed || cert.epsilon > 1e-8) continue;
      ++verified;
      const FeasiblePoint point = MakeFeasiblePoint(mp, game, p);
      const double phi = EvaluateObjective(mp, point.values);
      c.AtMost(phi, 1e-6, name + ": objective of a verified equilibrium");
      if (phi <= 1e-6) check_sound(point.values, "equilibrium point");
    }
    c.Expect(verified == static_cast<int>(equilibria.size()),
             name + ": a known equilibrium fails at 1e-8");
    c.Note(name + " min objective " + Str(lowest) + ", " +
           std::to_string(near_zero) + " draws near 0, " + std::to_string(verified) +
           " equilibria");
  }
}

void Ac6(Criterion& c) {
  Rng rng(6006);
  int optimal = 0;
  for (int t = 0; t < 200; ++t) {
    const LinearProgram lp = testing::RandomSmallLp(rng);
    const testing::OracleResult oracle = testing::VertexEnumeration(lp);
    const LpSolution sol = SolveLp(lp);
    const std::string tag = "LP " + std::to_string(t) + ": ";
    c.Expect(sol.status == oracle.status,
             tag + "status " + LpStatusName(sol.status) + " vs oracle " +
                 LpStatusName(oracle.status));
    if (sol.status != LpStatus::kOptimal || oracle.status != LpStatus::kOptimal) {
      continue;
    }
    ++optimal;
    c.Near(sol.objective_value, oracle.objective, 1e-8, tag + "objective");
    c.AtMost(DualityGap(lp, sol), 1e-7, tag + "duality gap");
    c.AtMost(ComplementarySlackness(lp, sol), 1e-6, tag + "complementary slackness");
  }
  c.Note(std::to_string(optimal) + " of 200 optimal");
}

void Ac7(Criterion& c) {
  Rng rng(7007);
  double worst_trip = 0.0, worst_member = 0.0, worst_mass = 0.0, worst_series = 0.0;
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    std::vector<const ControlledChain*> chains;
    double beta = 0.9;
    if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
      chains.push_back(&sc->chain);
      if (sc->criterion.discounted()) beta = sc->criterion.beta;
    } else {
      for (const ControlledChain& ch : std::get<IndependentGame>(game).chains) {
        chains.push_back(&ch);
      }
    }
    for (const ControlledChain* chain : chains) {
      for (int t = 0; t < 500; ++t) {
        const StationaryStrategy g = RandomStrategy(rng, chain->index);
        const OccupationMeasure x = AverageOccupation(*chain, g);
        const StationaryStrategy back = RecoverStrategy(chain->index, x.entries);
        for (const auto& cls : AnalyzeChain(TransitionMatrix(*chain, g)).recurrent_classes) {
          for (int s : cls) {
            worst_trip = std::max(worst_trip,
                                  (back.row(s) - g.row(s)).cwiseAbs().maxCoeff());
          }
        }
        worst_member = std::max(worst_member, MembershipResidual(*chain, x));

        const OccupationMeasure xd =
            DiscountedOccupation(*chain, g, chain->initial, beta);
        worst_member = std::max(worst_member, MembershipResidual(*chain, xd));
        worst_mass = std::max(worst_mass, std::abs(xd.entries.sum() - 1.0));
        const Eigen::VectorXd mass = testing::SeriesDiscounted(
            testing::TransitionOracle(*chain, g), chain->initial, beta, 400);
        for (int s = 0; s < chain->num_states(); ++s) {
          for (int a = 0; a < chain->index.num_actions(s); ++a) {
            worst_series = std::max(
                worst_series,
                std::abs(xd.entries(chain->index.Flat(s, a)) - mass(s) * g(s, a)));
          }
        }
        const StationaryStrategy back_d = RecoverStrategy(chain->index, xd.entries);
        for (int s = 0; s < chain->num_states(); ++s) {
          if (mass(s) > 1e-12) {
            worst_trip = std::max(worst_trip,
                                  (back_d.row(s) - g.row(s)).cwiseAbs().maxCoeff());
          }
        }
      }
    }
  }
  c.AtMost(worst_trip, 1e-9, "round-trip error");
  c.AtMost(worst_member, 1e-9, "membership residual");
  c.AtMost(worst_mass, 1e-9, "discounted mass error");
  c.AtMost(worst_series, 1e-6, "series oracle deviation");
  c.Note("round trip " + Str(worst_trip) + ", membership " + Str(worst_member) +
         ", series " + Str(worst_series));
}

void Ac8(Criterion& c) {
  const auto avg = std::get<SingleControllerGame>(BuiltinExample("sc-average"));
  const auto disc = std::get<SingleControllerGame>(BuiltinExample("sc-discounted"));
  std::string why;
  c.Expect(StructurallyEqual(SpecializeMp4(AssembleMp4(avg, 1.0), 1.0),
                             AssembleMp1(avg), {}, &why),
           "MP4(1) differs from MP1: " + why);
  for (double beta : {0.5, 0.9}) {
    SingleControllerGame g = disc;
    g.criterion = csg::Criterion::Discounted(beta);
    why.clear();
    c.Expect(StructurallyEqual(SpecializeMp4(AssembleMp4(g, beta), beta),
                               AssembleMp2(g), {}, &why),
             "MP4(" + Str(beta) + ") reduced differs from MP2: " + why);

    const MathProgram mp4 = AssembleMp4(g, beta);
    const std::vector<int> balance = mp4.RowsOf("(iii)");
    const std::vector<int> norm = mp4.RowsOf("(iv)");
    c.Expect(norm.size() == 1 && !balance.empty(), "MP4 row families missing");
    if (norm.size() != 1) continue;
    double rhs = 0.0;
    for (int r : balance) rhs += mp4.rows[r].rhs;
    c.Near(rhs, (1 - beta) * mp4.rows[norm[0]].rhs, 1e-12, "row-sum identity rhs");
    Rng rng(8008);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd point(mp4.num_variables());
      for (int k = 0; k < point.size(); ++k) point(k) = 4 * Uniform01(rng) - 2;
      double sum = 0.0;
      for (int r : balance) sum += mp4.rows[r].lhs.Evaluate(point);
      worst = std::max(
          worst, std::abs(sum - (1 - beta) * mp4.rows[norm[0]].lhs.Evaluate(point)));
    }
    c.AtMost(worst, 1e-12, "row-sum identity at beta " + Str(beta));
  }
}

void Ac9(Criterion& c) {
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = testing::ZeroSumVariant(BuiltinExample(name));
    const MathProgram qp = SpecializeQp(AssembleForGame(game), game);
    const ZeroSumPair pair = ZeroSumSplit(qp, game);
    const LpSolution first = SolveLp(pair.first);
    const LpSolution second = SolveLp(pair.second);
    const bool solved = first.status == LpStatus::kOptimal &&
                        second.status == LpStatus::kOptimal;
    c.Expect(solved, name + ": split LP not optimal");
    if (!solved) continue;
    c.Near(first.objective_value, second.objective_value, 1e-7, name + " values");
    c.AtMost(DualityGap(pair.first, first), 1e-7, name + " first duality gap");
    c.AtMost(DualityGap(pair.second, second), 1e-7, name + " second duality gap");
    const NashCertificate cert =
        VerifyNash(game, ZeroSumStrategies(qp, game, pair, first, second), 1e-6);
    c.Expect(cert.verdict != Verdict::kFailed && cert.epsilon <= 1e-6,
             name + ": recovered pair gap " + Str(cert.epsilon));
  }
}

void Ac10(Criterion& c) {
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    const NashCertificate cert = SolveNash(game);
    const CostReport analytic = ExpectedCosts(game, cert.strategies, kInf);
    const auto occupations = AnalyticOccupations(game, cert.strategies);
    std::map<std::string, int> failures;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const CompareReport cmp =
          Compare(Simulate(game, cert.strategies, 100000, seed), analytic,
                  occupations, 3.0);
      for (const Comparison& item : cmp.items) failures[item.quantity] += !item.pass;
    }
    int total = 0;
    for (const auto& [quantity, count] : failures) {
      c.Expect(count <= 1, name + " " + quantity + ": " + std::to_string(count) +
                               " of 100 seeds fail");
      total += count;
    }
    c.Note(name + ": " + std::to_string(total) + " failures over " +
           std::to_string(failures.size()) + " quantities");
  }
}

void Ac11(Criterion& c) {
  for (const std::string name : {"sc-average", "indep-2p"}) {
    const Game game = BuiltinExample(name);
    const GridResult grid = GridOracle(game, 64);
    const NashCertificate cert = SolveNash(game);
    c.AtMost(cert.epsilon, grid.min_gap + 1e-6,
             name + " solver gap over grid minimum " + Str(grid.min_gap));
    c.Note(name + ": grid min " + Str(grid.min_gap) + ", solver " +
           Str(cert.epsilon));
  }
}

struct Entry {
  const char* id;
  const char* description;
  void (*run)(Criterion&);
  double time_limit;  // seconds
};

int RunAll(bool verbose) {
  const std::vector<Entry> entries = {
      {"AC1", "average single-controller example reproduces", Ac1, 1.0},
      {"AC2", "discounted single-controller example reproduces", Ac2, 1.0},
      {"AC3", "independent-chains example reproduces for every alpha", Ac3, 1.0},
      {"AC4", "solver certifies all built-in examples", Ac4, 30.0},
      {"AC5", "objective is nonnegative and zero exactly at equilibria", Ac5, 0.0},
      {"AC6", "LP engine matches vertex enumeration", Ac6, 0.0},
      {"AC7", "occupation measures round-trip", Ac7, 0.0},
      {"AC8", "unified program specializes to both criteria", Ac8, 0.0},
      {"AC9", "zero-sum splits solve with equal values", Ac9, 0.0},
      {"AC10", "Monte Carlo agrees with analytic values", Ac10, 60.0},
      {"AC11", "solver gap within the 1/64 grid minimum", Ac11, 300.0},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    double seconds = 0.0;
    try {
      seconds = testing::TimeIt([&] { e.run(c); });
    } catch (const std::exception& ex) {
      c.Expect(false, std::string("exception: ") + ex.what());
    }
    if (e.time_limit > 0.0) {
      c.AtMost(seconds, e.time_limit, "runtime in seconds");
    }
    failed += c.failed();
    std::printf("[%s] %-4s %s (%.2f s)\n", c.failed() ? "FAIL" : "PASS", e.id,
                e.description, seconds);
    for (const std::string& f : c.failures()) std::printf("       %s\n", f.c_str());
    if (verbose) {
      for (const std::string& n : c.notes()) std::printf("       %s\n", n.c_str());
    }
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(entries.size()) - failed,
              entries.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace csg

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  return csg::RunAll(verbose);
}
