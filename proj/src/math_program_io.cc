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

#include "csg/math_program_io.h"

#include <iomanip>
#include <sstream>

#include "csg/error.h"

namespace csg {
namespace {

constexpr const char* kMagic = "csg-mp";
constexpr int kVersion = 1;

const char* RelationToken(Relation r) {
  switch (r) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kEqual:
      return "=";
    case Relation::kGreaterEqual:
      return ">=";
  }
  return "?";
}

void WriteTerms(std::ostream& out, const Polynomial& p) {
  for (const Term& t : p.terms) {
    out << "  " << t.coefficient;
    for (int v : t.vars) out << ' ' << v;
    out << '\n';
  }
}

// Line-oriented reader; '#' starts a comment.
class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::istringstream Next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        return std::istringstream(line);
      }
    }
    Error(std::string("unexpected end of input, expected ") + what);
  }

  [[noreturn]] void Error(const std::string& msg) const {
    Fail(ErrorCode::kSchema,
         "mp text line " + std::to_string(line_no_) + ": " + msg);
  }

  void Expect(std::istringstream& line, const std::string& keyword) {
    std::string word;
    if (!(line >> word) || word != keyword) {
      Error("expected '" + keyword + "'");
    }
  }

  template <typename T>
  T Read(std::istringstream& line, const char* what) {
    T value;
    if (!(line >> value)) Error(std::string("expected ") + what);
    return value;
  }

  Polynomial Terms(int count, int num_variables) {
    Polynomial p;
    for (int t = 0; t < count; ++t) {
      std::istringstream line = Next("term");
      Term term;
      term.coefficient = Read<double>(line, "coefficient");
      int v;
      while (line >> v) {
        if (v < 0 || v >= num_variables) Error("variable index out of range");
        term.vars.push_back(v);
      }
      if (!line.eof()) Error("bad variable index");
      p.terms.push_back(std::move(term));
    }
    return p;
  }

 private:
  std::istringstream in_;
  int line_no_ = 0;
};

const std::string& Token(const std::string& s) {
  if (s.empty() || s.find_first_of(" \t\r\n#") != std::string::npos) {
    Fail(ErrorCode::kInvalidArgument,
         "name '" + s + "' cannot be written as a single token");
  }
  return s;
}

}  // namespace

std::string WriteMathProgram(const MathProgram& mp) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << ProgramKindName(mp.kind) << '\n';
  out << "variables " << mp.num_variables() << '\n';
  for (const ProgramVariable& v : mp.variables) {
    out << "  " << Token(v.name) << ' ' << Token(v.block) << ' ' << v.player << '\n';
  }
  out << "objective " << mp.objective.terms.size() << '\n';
  WriteTerms(out, mp.objective);
  out << "rows " << mp.rows.size() << '\n';
  for (const ProgramRow& row : mp.rows) {
    out << "row " << Token(row.name) << ' ' << Token(row.family) << ' '
        << RelationToken(row.relation) << ' ' << row.rhs << ' '
        << row.lhs.terms.size() << '\n';
    WriteTerms(out, row.lhs);
  }
  out << "complementary " << mp.complementary.size() << '\n';
  for (const auto& [v, r] : mp.complementary) out << "  " << v << ' ' << r << '\n';
  out << "end\n";
  return out.str();
}

MathProgram ParseMathProgram(const std::string& text) {
  Reader reader(text);
  MathProgram mp;
  {
    auto line = reader.Next("header");
    reader.Expect(line, kMagic);
    if (reader.Read<int>(line, "version") != kVersion) {
      reader.Error("unsupported version");
    }
  }
  {
    auto line = reader.Next("kind");
    reader.Expect(line, "kind");
    const std::string name = reader.Read<std::string>(line, "kind name");
    bool found = false;
    for (ProgramKind k :
         {ProgramKind::kMP1, ProgramKind::kMP2, ProgramKind::kMP3,
          ProgramKind::kMP4, ProgramKind::kQP1, ProgramKind::kQP2,
          ProgramKind::kQP3}) {
      if (name == ProgramKindName(k)) {
        mp.kind = k;
        found = true;
      }
    }
    if (!found) reader.Error("unknown kind " + name);
  }
  auto count_line = [&](const char* keyword) {
    auto line = reader.Next(keyword);
    reader.Expect(line, keyword);
    const int n = reader.Read<int>(line, "count");
    if (n < 0) reader.Error("negative count");
    return n;
  };
  const int nv = count_line("variables");
  for (int i = 0; i < nv; ++i) {
    auto line = reader.Next("variable");
    const auto name = reader.Read<std::string>(line, "name");
    const auto block = reader.Read<std::string>(line, "block");
    const int player = reader.Read<int>(line, "player");
    mp.AddVariable(name, block, player);
  }
  mp.objective = reader.Terms(count_line("objective"), nv);
  const int nr = count_line("rows");
  for (int r = 0; r < nr; ++r) {
    auto line = reader.Next("row");
    reader.Expect(line, "row");
    const auto name = reader.Read<std::string>(line, "row name");
    const auto family = reader.Read<std::string>(line, "family");
    const auto rel = reader.Read<std::string>(line, "relation");
    const double rhs = reader.Read<double>(line, "rhs");
    const int nt = reader.Read<int>(line, "term count");
    Relation relation;
    if (rel == "<=") {
      relation = Relation::kLessEqual;
    } else if (rel == "=") {
      relation = Relation::kEqual;
    } else if (rel == ">=") {
      relation = Relation::kGreaterEqual;
    } else {
      reader.Error("bad relation " + rel);
    }
    mp.AddRow(reader.Terms(nt, nv), relation, rhs, family, name);
  }
  const int nc = count_line("complementary");
  for (int c = 0; c < nc; ++c) {
    auto line = reader.Next("pair");
    const int v = reader.Read<int>(line, "variable");
    const int r = reader.Read<int>(line, "row");
    if (v < 0 || v >= nv || r < 0 || r >= nr) reader.Error("pair out of range");
    mp.complementary.push_back({v, r});
  }
  auto line = reader.Next("end");
  reader.Expect(line, "end");
  return mp;
}

QuadraticForm ToQuadraticForm(const MathProgram& mp) {
  if (mp.ObjectiveDegree() > 2 || mp.ConstraintDegree() > 1) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(ProgramKindName(mp.kind)) +
             " is not a quadratic program with linear rows");
  }
  QuadraticForm form;
  std::vector<int> kept;
  std::vector<bool> nonneg(mp.num_variables(), false);
  for (int r = 0; r < static_cast<int>(mp.rows.size()); ++r) {
    const ProgramRow& row = mp.rows[r];
    const Polynomial c = row.lhs.Canonical();
    if (row.relation == Relation::kGreaterEqual && row.rhs == 0.0 &&
        c.terms.size() == 1 && c.terms[0].vars.size() == 1 &&
        c.terms[0].coefficient > 0.0) {
      nonneg[c.terms[0].vars[0]] = true;
    } else {
      kept.push_back(r);
    }
  }
  form.lp = LinearRows(mp, kept);
  for (int i = 0; i < mp.num_variables(); ++i) {
    if (nonneg[i]) form.lp.lower(i) = 0.0;
  }
  for (const Term& t : mp.objective.Canonical().terms) {
    if (t.vars.empty()) {
      form.constant += t.coefficient;
    } else if (t.vars.size() == 1) {
      form.lp.objective(t.vars[0]) += t.coefficient;
    } else {
      form.quadratic.push_back({t.vars[0], t.vars[1], t.coefficient});
    }
  }
  return form;
}

std::string WriteQpCplex(const MathProgram& mp, const std::string& title) {
  const QuadraticForm form = ToQuadraticForm(mp);
  return WriteCplexLp(form.lp, form.quadratic, form.constant,
                      title.empty() ? ProgramKindName(mp.kind) : title);
}

}  // namespace csg
