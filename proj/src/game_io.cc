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

#include "csg/game_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csg/error.h"
#include "json.hpp"

namespace csg {
namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    Fail(ErrorCode::kSchema, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

const json& Array(const json& node, const std::string& what, size_t size) {
  if (!node.is_array()) Fail(ErrorCode::kSchema, what + " must be an array");
  if (size != static_cast<size_t>(-1) && node.size() != size) {
    std::ostringstream msg;
    msg << what << " has " << node.size() << " entries, expected " << size;
    Fail(ErrorCode::kSchema, msg.str());
  }
  return node;
}

constexpr size_t kAny = static_cast<size_t>(-1);

double Number(const json& node, const std::string& what) {
  if (!node.is_number()) Fail(ErrorCode::kSchema, what + " must be a number");
  double value = node.get<double>();
  if (!std::isfinite(value)) Fail(ErrorCode::kSchema, what + " is not finite");
  return value;
}

Eigen::VectorXd Vector(const json& node, const std::string& what,
                       size_t size) {
  Array(node, what, size);
  Eigen::VectorXd out(node.size());
  for (size_t i = 0; i < node.size(); ++i) {
    out(i) = Number(node[i], what);
  }
  return out;
}

Eigen::MatrixXd Matrix(const json& node, const std::string& what, int rows,
                       int cols) {
  Array(node, what, rows);
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) out.row(r) = Vector(node[r], what, cols);
  return out;
}

void CheckDistribution(const Eigen::VectorXd& p, const std::string& what) {
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < 0) {
      Fail(ErrorCode::kNegativeProbability,
           what + " has a negative entry");
    }
  }
  if (std::abs(p.sum() - 1.0) > kInputStochasticTolerance) {
    std::ostringstream msg;
    msg << what << " sums to " << p.sum();
    Fail(ErrorCode::kStochasticity, msg.str());
  }
}

std::vector<std::string> Ids(const json& node, const std::string& what) {
  Array(node, what, kAny);
  std::vector<std::string> out;
  for (const json& id : node) {
    if (id.is_string()) {
      out.push_back(id.get<std::string>());
    } else if (id.is_number_integer()) {
      out.push_back(std::to_string(id.get<long>()));
    } else {
      Fail(ErrorCode::kSchema, what + " entries must be strings");
    }
  }
  if (out.empty()) Fail(ErrorCode::kSchema, what + " is empty");
  return out;
}

std::vector<std::vector<std::string>> ActionIds(const json& node,
                                                const std::string& what,
                                                size_t num_states) {
  Array(node, what, num_states);
  std::vector<std::vector<std::string>> out;
  for (const json& per_state : node) out.push_back(Ids(per_state, what));
  return out;
}

StateActionIndex IndexOf(const std::vector<std::vector<std::string>>& ids) {
  std::vector<int> counts;
  for (const auto& per_state : ids) counts.push_back(per_state.size());
  return StateActionIndex(std::move(counts));
}

Criterion ParseCriterion(const json& node) {
  const json& type = Field(node, "type");
  if (type == "average") return Criterion::Average();
  if (type == "discounted") {
    double beta = Number(Field(node, "beta"), "criterion.beta");
    if (beta < 0 || beta >= 1) {
      Fail(ErrorCode::kSchema, "criterion.beta must lie in [0, 1)");
    }
    return Criterion::Discounted(beta);
  }
  Fail(ErrorCode::kSchema, "criterion.type must be average or discounted");
}

json CriterionJson(const Criterion& c) {
  if (c.discounted()) return {{"type", "discounted"}, {"beta", c.beta}};
  return {{"type", "average"}};
}

// Shared by both kinds: states, actions, transitions [s][a][s'], gamma.
ControlledChain ParseChain(const json& doc, const char* actions_key,
                           const std::string& prefix) {
  ControlledChain chain;
  chain.state_ids = Ids(Field(doc, "states"), prefix + "states");
  const size_t n = chain.state_ids.size();
  chain.action_ids =
      ActionIds(Field(doc, actions_key), prefix + actions_key, n);
  chain.index = IndexOf(chain.action_ids);
  const json& trans = Array(Field(doc, "trans"), prefix + "trans", n);
  for (size_t s = 0; s < n; ++s) {
    const json& rows =
        Array(trans[s], prefix + "trans[s]", chain.action_ids[s].size());
    for (size_t a = 0; a < rows.size(); ++a) {
      std::ostringstream what;
      what << prefix << "trans[" << s << "][" << a << "]";
      Eigen::VectorXd p = Vector(rows[a], what.str(), n);
      CheckDistribution(p, what.str());
      chain.transition.push_back(std::move(p));
    }
  }
  chain.initial = Vector(Field(doc, "gamma"), prefix + "gamma", n);
  CheckDistribution(chain.initial, prefix + "gamma");
  return chain;
}

json ChainJson(const ControlledChain& chain, const char* actions_key) {
  json out;
  out["states"] = chain.state_ids;
  out[actions_key] = chain.action_ids;
  json trans = json::array();
  for (int s = 0; s < chain.num_states(); ++s) {
    json rows = json::array();
    for (int a = 0; a < chain.index.num_actions(s); ++a) {
      const Eigen::VectorXd& p = chain.transition[chain.index.Flat(s, a)];
      rows.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    trans.push_back(rows);
  }
  out["trans"] = trans;
  out["gamma"] = std::vector<double>(chain.initial.data(),
                                     chain.initial.data() + chain.initial.size());
  return out;
}

json MatrixJson(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

SingleControllerGame ParseSingleController(const json& doc) {
  SingleControllerGame g;
  g.chain = ParseChain(doc, "actions2", "");
  const int n = g.num_states();
  g.actions1 = ActionIds(Field(doc, "actions1"), "actions1", n);
  g.index1 = IndexOf(g.actions1);
  auto tensor = [&](const json& node, const std::string& what) {
    Array(node, what, n);
    std::vector<Eigen::MatrixXd> out;
    for (int s = 0; s < n; ++s) {
      out.push_back(Matrix(node[s], what, g.index1.num_actions(s),
                           g.index2().num_actions(s)));
    }
    return out;
  };
  g.cost1 = tensor(Field(doc, "cost1"), "cost1");
  g.cost2 = tensor(Field(doc, "cost2"), "cost2");
  const json& d2 = Array(Field(doc, "d2"), "d2", kAny);
  for (const json& t : d2) g.d2.push_back(tensor(t, "d2"));
  const json& d1 = Array(Field(doc, "d1_sub"), "d1_sub", kAny);
  for (const json& table : d1) {
    Array(table, "d1_sub", n);
    Eigen::VectorXd flat(g.index1.size());
    for (int s = 0; s < n; ++s) {
      flat.segment(g.index1.offset(s), g.index1.num_actions(s)) =
          Vector(table[s], "d1_sub", g.index1.num_actions(s));
    }
    g.d1_sub.push_back(flat);
  }
  g.xi1 = Vector(Field(doc, "xi1"), "xi1", g.d1_sub.size());
  g.xi2 = Vector(Field(doc, "xi2"), "xi2", g.d2.size());
  g.criterion = ParseCriterion(Field(doc, "criterion"));
  return g;
}

json SingleControllerJson(const SingleControllerGame& g) {
  json out = ChainJson(g.chain, "actions2");
  out["kind"] = "single_controller";
  out["criterion"] = CriterionJson(g.criterion);
  out["actions1"] = g.actions1;
  auto tensor = [](const std::vector<Eigen::MatrixXd>& t) {
    json arr = json::array();
    for (const auto& m : t) arr.push_back(MatrixJson(m));
    return arr;
  };
  out["cost1"] = tensor(g.cost1);
  out["cost2"] = tensor(g.cost2);
  out["d2"] = json::array();
  for (const auto& t : g.d2) out["d2"].push_back(tensor(t));
  out["d1_sub"] = json::array();
  for (const auto& flat : g.d1_sub) {
    json table = json::array();
    for (int s = 0; s < g.num_states(); ++s) {
      table.push_back(VectorJson(
          flat.segment(g.index1.offset(s), g.index1.num_actions(s))));
    }
    out["d1_sub"].push_back(table);
  }
  out["xi1"] = VectorJson(g.xi1);
  out["xi2"] = VectorJson(g.xi2);
  return out;
}

IndependentGame ParseIndependent(const json& doc) {
  const Criterion criterion = ParseCriterion(Field(doc, "criterion"));
  if (criterion.discounted()) {
    Fail(ErrorCode::kCriterionMismatch,
         "independent games support the average criterion only");
  }
  IndependentGame g;
  const json& players = Array(Field(doc, "players"), "players", kAny);
  if (players.empty()) Fail(ErrorCode::kSchema, "players is empty");
  for (size_t i = 0; i < players.size(); ++i) {
    const std::string prefix = "players[" + std::to_string(i) + "].";
    g.chains.push_back(ParseChain(players[i], "actions", prefix));
    g.xi.push_back(Vector(Field(players[i], "xi"), prefix + "xi", kAny));
  }
  const long total = g.joint().total();
  const json& cost = Array(Field(doc, "cost"), "cost", players.size());
  for (const json& c : cost) g.cost.push_back(Vector(c, "cost", total));
  const json& d = Array(Field(doc, "d"), "d", players.size());
  for (size_t i = 0; i < players.size(); ++i) {
    Array(d[i], "d[i]", g.xi[i].size());
    g.d.emplace_back();
    for (const json& dk : d[i]) g.d[i].push_back(Vector(dk, "d", total));
  }
  return g;
}

json IndependentJson(const IndependentGame& g) {
  json out;
  out["kind"] = "independent";
  out["criterion"] = CriterionJson(Criterion::Average());
  out["players"] = json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    json p = ChainJson(g.chains[i], "actions");
    p["xi"] = VectorJson(g.xi[i]);
    out["players"].push_back(p);
  }
  out["cost"] = json::array();
  for (const auto& c : g.cost) out["cost"].push_back(VectorJson(c));
  out["d"] = json::array();
  for (const auto& di : g.d) {
    json arr = json::array();
    for (const auto& dk : di) arr.push_back(VectorJson(dk));
    out["d"].push_back(arr);
  }
  return out;
}

json ParseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("malformed document: ") + e.what());
  }
}

void CheckVersion(const json& doc) {
  const json& version = Field(doc, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    Fail(ErrorCode::kSchema, "unsupported schema_version");
  }
}

}  // namespace

ParsedGame ParseGameDocument(const std::string& text) {
  const json doc = ParseJson(text);
  CheckVersion(doc);
  ParsedGame parsed;
  const json& kind = Field(doc, "kind");
  if (kind == "single_controller") {
    parsed.game = ParseSingleController(doc);
  } else if (kind == "independent") {
    parsed.game = ParseIndependent(doc);
  } else {
    Fail(ErrorCode::kSchema, "kind must be single_controller or independent");
  }
  if (doc.contains("assert_decoupled")) {
    if (!doc["assert_decoupled"].is_boolean()) {
      Fail(ErrorCode::kSchema, "assert_decoupled must be a boolean");
    }
    parsed.assert_decoupled = doc["assert_decoupled"].get<bool>();
  }
  return parsed;
}

Game ParseGame(const std::string& text) {
  return ParseGameDocument(text).game;
}

std::string SerializeGame(const Game& game, bool assert_decoupled) {
  json doc;
  if (const auto* sc = std::get_if<SingleControllerGame>(&game)) {
    doc = SingleControllerJson(*sc);
  } else {
    doc = IndependentJson(std::get<IndependentGame>(game));
  }
  doc["schema_version"] = kSchemaVersion;
  if (assert_decoupled) doc["assert_decoupled"] = true;
  return doc.dump(2) + "\n";
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ParsedGame LoadGameFile(const std::string& path) {
  return ParseGameDocument(ReadTextFile(path));
}

StrategyProfile ParseStrategies(const std::string& text, const Game& game) {
  const json doc = ParseJson(text);
  CheckVersion(doc);
  const int n = NumPlayers(game);
  const json& players = Array(Field(doc, "strategies"), "strategies", n);
  StrategyProfile profile;
  for (int i = 0; i < n; ++i) {
    const StateActionIndex index = PlayerIndex(game, i);
    Array(players[i], "strategies[i]", index.num_states());
    std::vector<Eigen::VectorXd> rows;
    for (int s = 0; s < index.num_states(); ++s) {
      rows.push_back(
          Vector(players[i][s], "strategy row", index.num_actions(s)));
      for (int a = 0; a < rows.back().size(); ++a) {
        if (rows.back()(a) < 0) {
          Fail(ErrorCode::kNegativeProbability, "negative strategy entry");
        }
      }
      if (std::abs(rows.back().sum() - 1.0) > kInputStochasticTolerance) {
        Fail(ErrorCode::kStochasticity, "strategy row does not sum to 1");
      }
    }
    profile.emplace_back(std::move(rows), kInputStochasticTolerance);
  }
  return profile;
}

std::string SerializeStrategies(const StrategyProfile& profile) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["strategies"] = json::array();
  for (const StationaryStrategy& strategy : profile) {
    json rows = json::array();
    for (const auto& row : strategy.rows()) rows.push_back(VectorJson(row));
    doc["strategies"].push_back(rows);
  }
  return doc.dump(2) + "\n";
}

}  // namespace csg
