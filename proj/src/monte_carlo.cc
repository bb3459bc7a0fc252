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

#include "csg/monte_carlo.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "csg/error.h"
#include "csg/game_io.h"
#include "csg/random.h"

namespace csg {
namespace {

using nlohmann::json;

int Sample(Rng& rng, const Eigen::VectorXd& p) {
  const double u = Uniform01(rng);
  double cumulative = 0.0;
  int last = -1;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    last = i;
    cumulative += p(i);
    if (u < cumulative) return i;
  }
  return last;
}

// Positions of the simulated quantities in one flat vector:
// occupations of each chain, then main costs, then constraint costs.
struct Layout {
  std::vector<int> occupation_offset;
  std::vector<int> occupation_size;
  int cost_offset = 0;
  int num_players = 0;
  std::vector<int> constraint_offset;
  std::vector<int> constraint_count;
  int size = 0;
};

// One trajectory of the game; Step adds weight * (indicators, costs) to acc.
class Trajectory {
 public:
  Trajectory(const Game& game, const StrategyProfile& profile,
             std::uint64_t seed)
      : profile_(profile) {
    CheckProfile(game, profile);
    if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
      sc_ = sc;
      rngs_.push_back(StreamRng(seed, 0));
      layout_.occupation_offset = {0};
      layout_.occupation_size = {sc->index2().size()};
      layout_.size = sc->index2().size();
      layout_.num_players = 2;
      layout_.cost_offset = layout_.size;
      layout_.size += 2;
      layout_.constraint_offset = {layout_.size, layout_.size};
      layout_.constraint_count = {0, sc->n2()};
      layout_.size += sc->n2();
      states_.resize(1);
    } else {
      ind_ = &std::get<IndependentGame>(game);
      joint_ = ind_->joint();
      const int n = ind_->num_players();
      for (int i = 0; i < n; ++i) {
        rngs_.push_back(StreamRng(seed, static_cast<std::uint64_t>(i)));
        layout_.occupation_offset.push_back(layout_.size);
        layout_.occupation_size.push_back(ind_->chains[i].index.size());
        layout_.size += ind_->chains[i].index.size();
      }
      layout_.num_players = n;
      layout_.cost_offset = layout_.size;
      layout_.size += n;
      for (int i = 0; i < n; ++i) {
        layout_.constraint_offset.push_back(layout_.size);
        layout_.constraint_count.push_back(ind_->num_constraints(i));
        layout_.size += ind_->num_constraints(i);
      }
      states_.resize(n);
    }
  }

  const Layout& layout() const { return layout_; }

  void Reset() {
    if (sc_) {
      states_[0] = Sample(rngs_[0], sc_->chain.initial);
    } else {
      for (size_t i = 0; i < states_.size(); ++i) {
        states_[i] = Sample(rngs_[i], ind_->chains[i].initial);
      }
    }
  }

  void Step(double weight, Eigen::VectorXd& acc) {
    if (sc_) {
      Rng& rng = rngs_[0];
      const int s = states_[0];
      const int a1 = Sample(rng, profile_[0].row(s));
      const int a2 = Sample(rng, profile_[1].row(s));
      const int pair = sc_->index2().Flat(s, a2);
      acc(pair) += weight;
      acc(layout_.cost_offset) += weight * sc_->cost1[s](a1, a2);
      acc(layout_.cost_offset + 1) += weight * sc_->cost2[s](a1, a2);
      for (int l = 0; l < sc_->n2(); ++l) {
        acc(layout_.constraint_offset[1] + l) += weight * sc_->d2[l][s](a1, a2);
      }
      states_[0] = Sample(rng, sc_->chain.transition[pair]);
      return;
    }
    const int n = ind_->num_players();
    long long joint = 0;
    pairs_.resize(n);
    for (int i = 0; i < n; ++i) {
      const int s = states_[i];
      const int a = Sample(rngs_[i], profile_[i].row(s));
      pairs_[i] = ind_->chains[i].index.Flat(s, a);
      joint += static_cast<long long>(pairs_[i]) * joint_.stride(i);
      acc(layout_.occupation_offset[i] + pairs_[i]) += weight;
    }
    for (int i = 0; i < n; ++i) {
      acc(layout_.cost_offset + i) += weight * ind_->cost[i](joint);
      for (int k = 0; k < ind_->num_constraints(i); ++k) {
        acc(layout_.constraint_offset[i] + k) += weight * ind_->d[i][k](joint);
      }
    }
    for (int i = 0; i < n; ++i) {
      states_[i] = Sample(rngs_[i], ind_->chains[i].transition[pairs_[i]]);
    }
  }

  double MaxAbsCost() const {
    double m = 0.0;
    if (sc_) {
      for (int s = 0; s < sc_->num_states(); ++s) {
        m = std::max({m, sc_->cost1[s].cwiseAbs().maxCoeff(),
                      sc_->cost2[s].cwiseAbs().maxCoeff()});
        for (const auto& d : sc_->d2) m = std::max(m, d[s].cwiseAbs().maxCoeff());
      }
      return m;
    }
    for (const auto& c : ind_->cost) m = std::max(m, c.cwiseAbs().maxCoeff());
    for (const auto& ds : ind_->d) {
      for (const auto& d : ds) m = std::max(m, d.cwiseAbs().maxCoeff());
    }
    return m;
  }

 private:
  const StrategyProfile& profile_;
  const SingleControllerGame* sc_ = nullptr;
  const IndependentGame* ind_ = nullptr;
  JointIndex joint_{std::vector<int>{1}};
  std::vector<Rng> rngs_;
  std::vector<int> states_;
  std::vector<int> pairs_;
  Layout layout_;
};

// Mean and standard error of the mean over the rows of `samples`.
void MeanAndError(const Eigen::MatrixXd& samples, Eigen::VectorXd& mean,
                  Eigen::VectorXd& error) {
  const Eigen::Index m = samples.rows();
  mean = samples.colwise().mean().transpose();
  if (m < 2) {
    error = Eigen::VectorXd::Constant(samples.cols(),
                                      std::numeric_limits<double>::infinity());
    return;
  }
  const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  error = (centered.colwise().squaredNorm().transpose() /
           static_cast<double>(m * (m - 1)))
              .cwiseSqrt();
}

void Unpack(const Layout& layout, const Eigen::VectorXd& mean,
            const Eigen::VectorXd& error, SimReport& report) {
  for (size_t c = 0; c < layout.occupation_offset.size(); ++c) {
    report.empirical_occupation.push_back(
        mean.segment(layout.occupation_offset[c], layout.occupation_size[c]));
    report.occupation_errors.push_back(
        error.segment(layout.occupation_offset[c], layout.occupation_size[c]));
  }
  for (int i = 0; i < layout.num_players; ++i) {
    report.empirical_costs.push_back(mean(layout.cost_offset + i));
    report.cost_errors.push_back(error(layout.cost_offset + i));
    std::vector<double> c, e;
    for (int k = 0; k < layout.constraint_count[i]; ++k) {
      c.push_back(mean(layout.constraint_offset[i] + k));
      e.push_back(error(layout.constraint_offset[i] + k));
    }
    report.empirical_constraint_costs.push_back(std::move(c));
    report.constraint_errors.push_back(std::move(e));
  }
}

bool Discounted(const Game& game, double* beta) {
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    *beta = sc->criterion.beta;
    return sc->criterion.discounted();
  }
  *beta = 0.0;
  return false;
}

json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd JsonVector(const json& j) {
  const std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

// JSON has no infinity; missing standard errors are written as null.
json ErrorJson(double e) { return std::isfinite(e) ? json(e) : json(nullptr); }

double JsonError(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

SimReport Simulate(const Game& game, const StrategyProfile& strategies,
                   long long horizon, std::uint64_t seed,
                   const SimOptions& options) {
  if (horizon < 1) Fail(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (options.batches < 1 || options.burn_in < 0) {
    Fail(ErrorCode::kInvalidArgument, "bad simulation options");
  }
  Trajectory traj(game, strategies, seed);
  const Layout& layout = traj.layout();
  SimReport report;
  report.horizon = horizon;
  report.seed = seed;
  report.discounted = Discounted(game, &report.beta);
  Eigen::VectorXd mean, error;
  if (!report.discounted) {
    const long long batches = std::min<long long>(options.batches, horizon);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(batches, layout.size);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(layout.size);
    Eigen::VectorXd scratch = Eigen::VectorXd::Zero(layout.size);
    traj.Reset();
    for (long long t = 0; t < options.burn_in; ++t) traj.Step(0.0, scratch);
    long long batch = 0, batch_steps = 0;
    long long batch_end = horizon / batches;
    for (long long t = 0; t < horizon; ++t) {
      traj.Step(1.0, acc);
      ++batch_steps;
      if (t + 1 == batch_end) {
        sums.row(batch) = acc.transpose() / static_cast<double>(batch_steps);
        acc.setZero();
        batch_steps = 0;
        ++batch;
        batch_end = (batch + 1) * horizon / batches;
      }
    }
    // Batches differ in length by at most one step; the plain mean of the
    // batch means is the overall mean up to that imbalance, so the overall
    // mean is taken from the totals.
    Eigen::VectorXd total = Eigen::VectorXd::Zero(layout.size);
    for (long long b = 0; b < batches; ++b) {
      const long long len = (b + 1) * horizon / batches - b * horizon / batches;
      total += sums.row(b).transpose() * static_cast<double>(len);
    }
    MeanAndError(sums, mean, error);
    mean = total / static_cast<double>(horizon);
    report.episode_length = horizon;
  } else {
    const double beta = report.beta;
    long long length = 1;
    if (beta > 0.0) {
      length = static_cast<long long>(
          std::ceil(std::log(options.discount_tail) / std::log(beta)));
      length = std::max<long long>(length, 1);
    }
    const long long episodes = std::max<long long>(1, horizon / length);
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(episodes, layout.size);
    Eigen::VectorXd acc(layout.size);
    for (long long e = 0; e < episodes; ++e) {
      acc.setZero();
      traj.Reset();
      double weight = 1.0 - beta;
      for (long long t = 0; t < length; ++t) {
        traj.Step(weight, acc);
        weight *= beta;
      }
      values.row(e) = acc.transpose();
    }
    MeanAndError(values, mean, error);
    report.episodes = episodes;
    report.episode_length = length;
    report.truncation_bound = std::pow(beta, static_cast<double>(length)) *
                              traj.MaxAbsCost();
  }
  Unpack(layout, mean, error, report);
  return report;
}

bool CompareReport::all_pass() const {
  for (const Comparison& c : items) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<Eigen::VectorXd> AnalyticOccupations(const Game& game,
                                                 const StrategyProfile& profile) {
  std::vector<Eigen::VectorXd> occ = OccupationVectors(game, profile);
  if (std::holds_alternative<SingleControllerGame>(game)) return {occ[1]};
  return occ;
}

CompareReport Compare(const SimReport& sim, const CostReport& analytic,
                      const std::vector<Eigen::VectorXd>& occupations,
                      double z) {
  if (!(z > 0.0)) Fail(ErrorCode::kInvalidArgument, "z must be positive");
  auto mismatch = [](const std::string& what) {
    Fail(ErrorCode::kShapeMismatch, "simulation and analytic " + what +
                                        " have different shapes");
  };
  if (occupations.size() != sim.empirical_occupation.size()) {
    mismatch("occupations");
  }
  if (analytic.main_costs.size() != sim.empirical_costs.size()) mismatch("costs");
  CompareReport report;
  auto add = [&](std::string name, double emp, double ana, double se) {
    Comparison c{std::move(name), emp, ana, se, false};
    const double diff = std::abs(emp - ana);
    c.pass = se > 0.0 ? diff <= z * se
                      : diff <= 1e-12 * std::max(1.0, std::abs(ana));
    report.items.push_back(std::move(c));
  };
  for (size_t c = 0; c < occupations.size(); ++c) {
    if (occupations[c].size() != sim.empirical_occupation[c].size()) {
      mismatch("occupations");
    }
    for (Eigen::Index k = 0; k < occupations[c].size(); ++k) {
      add("occupation[" + std::to_string(c + 1) + "][" + std::to_string(k) + "]",
          sim.empirical_occupation[c](k), occupations[c](k),
          sim.occupation_errors[c](k));
    }
  }
  const bool sc = sim.empirical_constraint_costs.size() == 2 &&
                  sim.empirical_constraint_costs[0].empty() &&
                  analytic.constraint_costs.size() == 2 &&
                  !analytic.constraint_costs[0].empty();
  for (size_t i = 0; i < sim.empirical_costs.size(); ++i) {
    add("cost[" + std::to_string(i + 1) + "]", sim.empirical_costs[i],
        analytic.main_costs[i], sim.cost_errors[i]);
    if (sc && i == 0) continue;
    if (analytic.constraint_costs[i].size() !=
        sim.empirical_constraint_costs[i].size()) {
      mismatch("constraint costs");
    }
    for (size_t k = 0; k < sim.empirical_constraint_costs[i].size(); ++k) {
      add("constraint[" + std::to_string(i + 1) + "][" + std::to_string(k + 1) + "]",
          sim.empirical_constraint_costs[i][k], analytic.constraint_costs[i][k],
          sim.constraint_errors[i][k]);
    }
  }
  return report;
}

std::string SerializeSimReport(const SimReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "sim_report";
  j["criterion"] = r.discounted ? json{{"type", "discounted"}, {"beta", r.beta}}
                                : json{{"type", "average"}};
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["episodes"] = r.episodes;
  j["episode_length"] = r.episode_length;
  j["truncation_bound"] = r.truncation_bound;
  json occ = json::array(), occ_err = json::array();
  for (size_t c = 0; c < r.empirical_occupation.size(); ++c) {
    occ.push_back(VectorJson(r.empirical_occupation[c]));
    json e = json::array();
    for (Eigen::Index k = 0; k < r.occupation_errors[c].size(); ++k) {
      e.push_back(ErrorJson(r.occupation_errors[c](k)));
    }
    occ_err.push_back(std::move(e));
  }
  j["occupations"] = std::move(occ);
  j["occupation_errors"] = std::move(occ_err);
  j["costs"] = r.empirical_costs;
  json cost_err = json::array();
  for (double e : r.cost_errors) cost_err.push_back(ErrorJson(e));
  j["cost_errors"] = std::move(cost_err);
  j["constraint_costs"] = r.empirical_constraint_costs;
  json cons_err = json::array();
  for (const auto& row : r.constraint_errors) {
    json e = json::array();
    for (double x : row) e.push_back(ErrorJson(x));
    cons_err.push_back(std::move(e));
  }
  j["constraint_errors"] = std::move(cons_err);
  return j.dump(2) + "\n";
}

SimReport ParseSimReport(const std::string& text) {
  SimReport r;
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kSchemaVersion ||
        j.at("kind").get<std::string>() != "sim_report") {
      Fail(ErrorCode::kSchema, "not a version 1 sim_report document");
    }
    const json& crit = j.at("criterion");
    r.discounted = crit.at("type").get<std::string>() == "discounted";
    if (r.discounted) r.beta = crit.at("beta").get<double>();
    r.horizon = j.at("horizon").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.episodes = j.at("episodes").get<long long>();
    r.episode_length = j.at("episode_length").get<long long>();
    r.truncation_bound = j.at("truncation_bound").get<double>();
    for (const json& o : j.at("occupations")) {
      r.empirical_occupation.push_back(JsonVector(o));
    }
    for (const json& o : j.at("occupation_errors")) {
      Eigen::VectorXd e(o.size());
      for (size_t k = 0; k < o.size(); ++k) e(k) = JsonError(o[k]);
      r.occupation_errors.push_back(e);
    }
    r.empirical_costs = j.at("costs").get<std::vector<double>>();
    for (const json& e : j.at("cost_errors")) r.cost_errors.push_back(JsonError(e));
    r.empirical_constraint_costs =
        j.at("constraint_costs").get<std::vector<std::vector<double>>>();
    for (const json& row : j.at("constraint_errors")) {
      std::vector<double> e;
      for (const json& x : row) e.push_back(JsonError(x));
      r.constraint_errors.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("sim report: ") + e.what());
  }
  return r;
}

}  // namespace csg
