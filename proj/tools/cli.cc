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

#include "cli.h"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "csg/best_response.h"
#include "csg/builtin_examples.h"
#include "csg/chain_analysis.h"
#include "csg/error.h"
#include "csg/game_io.h"
#include "csg/lp_format.h"
#include "csg/math_program_io.h"
#include "csg/monte_carlo.h"
#include "csg/nash_solver.h"
#include "csg/programs.h"
#include "csg/zero_sum.h"

namespace csg::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string builtin;
  std::string game_path;
  std::string criterion;
  std::optional<double> beta;
  std::uint64_t seed = 0;
  int restarts = SolverConfig{}.restarts;
  double phi_tolerance = SolverConfig{}.phi_tolerance;
  std::string out_path;
  std::string format = "human";
  int threads = 1;
  std::string strategies_path;
  double epsilon = 1e-3;
  long long horizon = 100000;
  double z = 3.0;
  std::string program = "auto";
};

// Usage problems detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void AddGameOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--builtin", o.builtin, "built-in example name");
  cmd->add_option("--game", o.game_path, "game document path");
  cmd->add_option("--criterion", o.criterion, "average or discounted")
      ->check(CLI::IsMember({"average", "discounted"}));
  cmd->add_option("--beta", o.beta, "discount factor in (0, 1)");
}

void AddOutputOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_path, "write the machine-readable result here");
  cmd->add_option("--format", o.format, "human or document")
      ->check(CLI::IsMember({"human", "document"}));
}

Game LoadGame(const Options& o) {
  if (o.builtin.empty() == o.game_path.empty()) {
    throw UsageError("exactly one of --builtin and --game is required");
  }
  Game game = o.builtin.empty() ? LoadGameFile(o.game_path).game
                                : BuiltinExample(o.builtin);
  if (o.criterion.empty() && !o.beta) return game;
  if (o.criterion == "average" && o.beta) {
    throw UsageError("--beta needs the discounted criterion");
  }
  const bool discounted = o.criterion == "discounted" ||
                          (o.criterion.empty() && o.beta.has_value());
  if (auto* sc = std::get_if<SingleControllerGame>(&game)) {
    if (!discounted) {
      sc->criterion = Criterion::Average();
      return game;
    }
    const double beta = o.beta ? *o.beta : sc->criterion.beta;
    if (!(beta > 0.0 && beta < 1.0)) {
      throw UsageError("the discounted criterion needs --beta in (0, 1)");
    }
    sc->criterion = Criterion::Discounted(beta);
  } else if (discounted) {
    Fail(ErrorCode::kCriterionMismatch,
         "independent games use the average criterion");
  }
  return game;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::ios_base::failure("cannot write " + path);
}

std::string Fixed4(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << (std::abs(x) < 5e-5 ? 0.0 : x);
  return s.str();
}

json Finite(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json StrategiesJson(const StrategyProfile& profile) {
  return json::parse(SerializeStrategies(profile)).at("strategies");
}

std::string GameLabel(const Game& game) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    std::ostringstream s;
    s << "single controller, ";
    if (sc->criterion.discounted()) {
      s << "discounted (beta " << sc->criterion.beta << ")";
    } else {
      s << "average";
    }
    return s.str();
  }
  return std::to_string(NumPlayers(game)) + " independent chains, average";
}

std::vector<std::string> StateIds(const Game& game, int player) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    return sc->chain.state_ids;
  }
  return std::get<IndependentGame>(game).chains[player].state_ids;
}

void PrintStrategies(std::ostream& out, const Game& game,
                     const StrategyProfile& profile) {
  for (size_t i = 0; i < profile.size(); ++i) {
    out << "  player " << i + 1 << ":\n";
    const std::vector<std::string> ids = StateIds(game, static_cast<int>(i));
    for (int s = 0; s < profile[i].num_states(); ++s) {
      out << "    state " << ids[s] << ":";
      for (Eigen::Index a = 0; a < profile[i].row(s).size(); ++a) {
        out << ' ' << Fixed4(profile[i](s, a));
      }
      out << '\n';
    }
  }
}

json CertificateJson(const NashCertificate& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "nash_certificate";
  j["program"] = ProgramKindName(c.program);
  j["verdict"] = VerdictName(c.verdict);
  j["objective"] = Finite(c.objective_value);
  j["residual_max"] = Finite(c.residual_max);
  j["epsilon"] = Finite(c.epsilon);
  json gaps = json::array();
  for (double g : c.epsilon_gaps) gaps.push_back(Finite(g));
  j["epsilon_gaps"] = gaps;
  j["costs"] = c.costs.main_costs;
  j["constraint_costs"] = c.costs.constraint_costs;
  j["constraint_violation"] = Finite(c.constraint_violation);
  j["strategies"] = StrategiesJson(c.strategies);
  json point = json::array();
  for (Eigen::Index k = 0; k < c.point.values.size(); ++k) {
    point.push_back(c.point.values(k));
  }
  j["point"] = point;
  j["findings"] = c.findings;
  return j;
}

void PrintCertificate(std::ostream& out, const Game& game,
                      const NashCertificate& c) {
  const char* obj = std::holds_alternative<IndependentGame>(game) ? "psi" : "Phi";
  out << "verdict: " << VerdictName(c.verdict);
  if (c.verdict == Verdict::kEpsilonOnly) out << " (epsilon " << Fixed4(c.epsilon) << ")";
  out << '\n';
  out << "program: " << ProgramKindName(c.program) << '\n';
  out << obj << ": " << Fixed4(c.objective_value) << '\n';
  out << "max residual: " << Fixed4(c.residual_max) << '\n';
  for (size_t i = 0; i < c.costs.main_costs.size(); ++i) {
    out << "player " << i + 1 << ": cost " << Fixed4(c.costs.main_costs[i]);
    if (i < c.epsilon_gaps.size()) out << ", gap " << Fixed4(c.epsilon_gaps[i]);
    for (size_t k = 0; k < c.costs.constraint_costs[i].size(); ++k) {
      out << ", constraint " << k + 1 << ' '
          << Fixed4(c.costs.constraint_costs[i][k]);
    }
    out << '\n';
  }
  out << "strategies:\n";
  PrintStrategies(out, game, c.strategies);
  for (const std::string& f : c.findings) out << "finding: " << f << '\n';
}

SolverConfig ConfigFrom(const Options& o) {
  SolverConfig config;
  config.rng_seed = o.seed;
  config.restarts = o.restarts;
  config.phi_tolerance = o.phi_tolerance;
  config.threads = o.threads;
  config.Check();
  return config;
}

int EmitCertificate(const Options& o, const Game& game, const NashCertificate& c,
                    bool pass, std::ostream& out) {
  const std::string doc = CertificateJson(c).dump(2) + "\n";
  if (!o.out_path.empty()) WriteFile(o.out_path, doc);
  if (o.format == "document") {
    out << doc;
  } else {
    PrintCertificate(out, game, c);
  }
  return pass ? kExitOk : kExitSoftFail;
}

int Solve(const Options& o, std::ostream& out) {
  const Game game = LoadGame(o);
  const NashCertificate c = SolveNash(game, ConfigFrom(o));
  if (o.format == "human") out << "game: " << GameLabel(game) << '\n';
  return EmitCertificate(o, game, c, c.verdict == Verdict::kCertified, out);
}

StrategyProfile LoadStrategies(const Options& o, const Game& game) {
  if (o.strategies_path.empty()) throw UsageError("--strategies is required");
  return ParseStrategies(ReadTextFile(o.strategies_path), game);
}

int Verify(const Options& o, std::ostream& out) {
  const Game game = LoadGame(o);
  const StrategyProfile profile = LoadStrategies(o, game);
  const NashCertificate c = VerifyNash(game, profile, o.epsilon, o.phi_tolerance);
  const bool pass = c.verdict != Verdict::kFailed;
  if (o.format == "human") {
    out << "game: " << GameLabel(game) << '\n';
    out << "check at epsilon " << o.epsilon << ": " << (pass ? "pass" : "fail")
        << '\n';
  }
  return EmitCertificate(o, game, c, pass, out);
}

int Simulate(const Options& o, std::ostream& out) {
  const Game game = LoadGame(o);
  if (o.horizon < 1) throw UsageError("--horizon must be >= 1");
  StrategyProfile profile;
  if (o.strategies_path.empty()) {
    profile = SolveNash(game, ConfigFrom(o)).strategies;
  } else {
    profile = LoadStrategies(o, game);
  }
  const SimReport sim = csg::Simulate(game, profile, o.horizon, o.seed);
  const CompareReport cmp = Compare(sim, ExpectedCosts(game, profile, kInf),
                                    AnalyticOccupations(game, profile), o.z);
  const std::string doc = SerializeSimReport(sim);
  if (!o.out_path.empty()) WriteFile(o.out_path, doc);
  if (o.format == "document") {
    out << doc;
  } else {
    out << "game: " << GameLabel(game) << '\n';
    out << "horizon " << sim.horizon << ", seed " << sim.seed;
    if (sim.discounted) {
      out << ", " << sim.episodes << " episodes of " << sim.episode_length
          << " steps, truncation bound " << sim.truncation_bound;
    }
    out << '\n';
    for (const Comparison& c : cmp.items) {
      out << "  " << std::left << std::setw(18) << c.quantity << std::right
          << " empirical " << Fixed4(c.empirical) << "  analytic "
          << Fixed4(c.analytic) << "  se " << Fixed4(c.standard_error) << "  "
          << (c.pass ? "ok" : "FAIL") << '\n';
    }
    out << (cmp.all_pass() ? "all quantities within " : "some quantities beyond ")
        << o.z << " standard errors\n";
  }
  return cmp.all_pass() ? kExitOk : kExitSoftFail;
}

int Export(const Options& o, std::ostream& out) {
  const Game game = LoadGame(o);
  const bool sc = std::holds_alternative<SingleControllerGame>(game);
  auto emit = [&](const std::string& text, const std::string& suffix) {
    if (o.out_path.empty()) {
      out << text;
    } else {
      WriteFile(o.out_path + suffix, text);
    }
  };
  const std::string& p = o.program;
  if (p == "auto" || p == "mp1" || p == "mp2" || p == "mp3") {
    MathProgram mp;
    if (p == "auto") {
      mp = AssembleForGame(game);
    } else if (p == "mp3") {
      if (sc) Fail(ErrorCode::kInvalidArgument, "MP3 needs an independent game");
      mp = AssembleMp3(std::get<IndependentGame>(game));
    } else {
      if (!sc) Fail(ErrorCode::kInvalidArgument, "MP1/MP2 need a single-controller game");
      const auto& g = std::get<SingleControllerGame>(game);
      mp = p == "mp1" ? AssembleMp1(g) : AssembleMp2(g);
    }
    emit(WriteMathProgram(mp), "");
    return kExitOk;
  }
  if (p == "mp4") {
    if (!sc) Fail(ErrorCode::kInvalidArgument, "MP4 needs a single-controller game");
    const auto& g = std::get<SingleControllerGame>(game);
    const double beta = o.beta ? *o.beta
                               : (g.criterion.discounted() ? g.criterion.beta : 1.0);
    emit(WriteMathProgram(AssembleMp4(g, beta)), "");
    return kExitOk;
  }
  const MathProgram qp = SpecializeQp(AssembleForGame(game), game);
  if (p == "qp") {
    emit(WriteQpCplex(qp), "");
    return kExitOk;
  }
  if (p == "zero-sum") {
    const ZeroSumPair pair = ZeroSumSplit(qp, game);
    const std::string title = ProgramKindName(qp.kind);
    const std::string first = WriteCplexLp(pair.first, {}, 0.0, title + " first half");
    const std::string second =
        WriteCplexLp(pair.second, {}, 0.0, title + " second half");
    if (o.out_path.empty()) {
      out << first << '\n' << second;
    } else {
      emit(first, ".first.lp");
      emit(second, ".second.lp");
    }
    return kExitOk;
  }
  throw UsageError("unknown --program " + p);
}

int Examples(std::ostream& out) {
  for (const std::string& name : BuiltinExampleNames()) {
    const Game game = BuiltinExample(name);
    out << name << ": " << GameLabel(game) << ';';
    for (int i = 0; i < NumPlayers(game); ++i) {
      const StateActionIndex index = PlayerIndex(game, i);
      out << " player " << i + 1 << " states " << index.num_states()
          << " actions";
      for (int s = 0; s < index.num_states(); ++s) {
        out << (s ? "," : " ") << index.num_actions(s);
      }
      out << (i + 1 < NumPlayers(game) ? ";" : "");
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Nash equilibria of constrained stochastic games", "csgame"};
  app.require_subcommand(1);
  CLI::App* solve = app.add_subcommand("solve", "search for a certified equilibrium");
  CLI::App* verify = app.add_subcommand("verify", "check a strategy profile");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo check of a profile");
  CLI::App* exporter = app.add_subcommand("export", "write a program as text");
  CLI::App* examples = app.add_subcommand("examples", "list built-in games");
  for (CLI::App* cmd : {solve, verify, simulate, exporter}) AddGameOptions(cmd, o);
  for (CLI::App* cmd : {solve, verify, simulate}) AddOutputOptions(cmd, o);
  for (CLI::App* cmd : {solve, simulate}) {
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--restarts", o.restarts, "solver restarts");
    cmd->add_option("--phi-tol", o.phi_tolerance, "objective tolerance");
    cmd->add_option("--threads", o.threads, "solver threads");
  }
  verify->add_option("--strategies", o.strategies_path, "strategies document")
      ->required();
  verify->add_option("--epsilon", o.epsilon, "best-response tolerance");
  verify->add_option("--phi-tol", o.phi_tolerance, "objective tolerance");
  simulate->add_option("--strategies", o.strategies_path,
                       "strategies document (default: solve first)");
  simulate->add_option("--horizon", o.horizon, "simulated steps");
  simulate->add_option("--z", o.z, "standard errors allowed");
  exporter->add_option("--program", o.program,
                       "auto, mp1, mp2, mp3, mp4, qp or zero-sum");
  exporter->add_option("--out", o.out_path, "output path (prefix for zero-sum)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return Solve(o, out);
    if (verify->parsed()) return Verify(o, out);
    if (simulate->parsed()) return Simulate(o, out);
    if (exporter->parsed()) return Export(o, out);
    if (examples->parsed()) return Examples(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "file error: " << e.what() << '\n';
    return kExitFile;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnknownExample) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace csg::cli
