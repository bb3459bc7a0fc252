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

#include "csg/lp_format.h"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace csg {
namespace {

std::string Sanitize(const std::string& raw) {
  std::string out;
  for (char ch : raw) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
      out += ch;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) {
    out = "x" + out;
  }
  return out;
}

std::string Number(double value) {
  std::ostringstream s;
  s.precision(17);
  s << value;
  return s.str();
}

// Appends " + c name" / " - c name", wrapping long rows.
class TermWriter {
 public:
  explicit TermWriter(std::ostringstream& out) : out_(out) {}

  void Add(double coefficient, const std::string& body) {
    if (coefficient == 0.0) return;
    if (count_ > 0 && count_ % 6 == 0) out_ << "\n   ";
    out_ << (coefficient < 0 ? " - " : (count_ == 0 ? " " : " + "));
    const double mag = std::abs(coefficient);
    if (mag != 1.0) out_ << Number(mag) << " ";
    out_ << body;
    ++count_;
  }

  bool empty() const { return count_ == 0; }

 private:
  std::ostringstream& out_;
  int count_ = 0;
};

}  // namespace

std::vector<std::string> CplexNames(const LinearProgram& lp) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (int j = 0; j < lp.num_variables(); ++j) {
    std::string base = Sanitize(j < static_cast<int>(lp.names.size())
                                    ? lp.names[j]
                                    : "x" + std::to_string(j + 1));
    std::string name = base;
    for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
    used.insert(name);
    names.push_back(name);
  }
  return names;
}

std::string WriteCplexLp(const LinearProgram& lp,
                         const std::vector<QuadraticTerm>& quadratic,
                         double objective_constant, const std::string& title) {
  lp.Check();
  const std::vector<std::string> names = CplexNames(lp);
  std::ostringstream out;
  if (!title.empty()) out << "\\ " << title << "\n";
  out << (lp.sense == Sense::kMinimize ? "Minimize" : "Maximize") << "\n";
  out << " obj:";
  TermWriter objective(out);
  for (int j = 0; j < lp.num_variables(); ++j) {
    objective.Add(lp.objective(j), names[j]);
  }
  if (!quadratic.empty()) {
    out << (objective.empty() ? " [" : " + [");
    TermWriter quad(out);
    for (const QuadraticTerm& t : quadratic) {
      const std::string body = t.i == t.j ? names[t.i] + " ^ 2"
                                          : names[t.i] + " * " + names[t.j];
      quad.Add(2.0 * t.coefficient, body);
    }
    out << " ] / 2";
  }
  if (objective_constant != 0.0) {
    out << (objective_constant < 0 ? " - " : " + ")
        << Number(std::abs(objective_constant));
  } else if (objective.empty() && quadratic.empty()) {
    out << " 0 " << (names.empty() ? "x0" : names[0]);
  }
  out << "\nSubject To\n";
  std::set<std::string> used_rows;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const LinearConstraint& row = lp.constraints[i];
    std::string label = Sanitize(row.name.empty() ? "c" + std::to_string(i + 1)
                                                  : row.name);
    std::string unique = label;
    for (int k = 2; used_rows.count(unique); ++k) {
      unique = label + "_" + std::to_string(k);
    }
    used_rows.insert(unique);
    out << " " << unique << ":";
    TermWriter terms(out);
    for (int j = 0; j < lp.num_variables(); ++j) {
      terms.Add(row.coefficients(j), names[j]);
    }
    if (terms.empty()) out << " 0 " << (names.empty() ? "x0" : names[0]);
    switch (row.relation) {
      case Relation::kLessEqual:
        out << " <= ";
        break;
      case Relation::kEqual:
        out << " = ";
        break;
      case Relation::kGreaterEqual:
        out << " >= ";
        break;
    }
    out << Number(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double lo = lp.lower(j);
    const double hi = lp.upper(j);
    if (lo == 0.0 && hi == kInf) continue;
    if (lo == -kInf && hi == kInf) {
      out << " " << names[j] << " free\n";
    } else if (hi == kInf) {
      out << " " << names[j] << " >= " << Number(lo) << "\n";
    } else {
      out << " " << (lo == -kInf ? "-inf" : Number(lo)) << " <= " << names[j]
          << " <= " << Number(hi) << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace csg
