#include "qfa/ineq.hpp"

#include <algorithm>

namespace qfa {

std::string VarKey::str(const Alphabet& a) const {
  switch (kind) {
    case VarKind::X0:
      return "x0";
    case VarKind::P1:
      return "p1";
    case VarKind::P2:
      return "p2";
    case VarKind::X:
      return "x:" + set.str(a) + "|" + std::string(1, a.letter(letter));
    case VarKind::Y:
      return "y:" + set.str(a);
  }
  throw Error("unreachable");
}

VarKey VarKey::parse(const Alphabet& a, std::string_view s) {
  if (s == "x0") return x0();
  if (s == "p1") return p1();
  if (s == "p2") return p2();
  if (s.rfind("y:", 0) == 0) return y(LetterSet::parse(a, s.substr(2)));
  if (s.rfind("x:", 0) == 0) {
    size_t bar = s.find('|');
    if (bar == std::string_view::npos || bar + 2 != s.size())
      throw InputError("bad x variable \"" + std::string(s) + "\"");
    LetterSet prefix = LetterSet::parse(a, s.substr(2, bar - 2));
    int li = a.index_checked(s[bar + 1]);
    if (prefix.test(li))
      throw InputError("x variable letter inside its prefix: \"" +
                       std::string(s) + "\"");
    return x(prefix, li);
  }
  throw InputError("unknown variable \"" + std::string(s) + "\"");
}

void LinExpr::add(const VarKey& k, const Rat& c) {
  Rat& slot = terms[k];
  slot += c;
  if (slot == 0) terms.erase(k);
}

Rat LinExpr::eval(const std::map<VarKey, Rat>& assignment,
                  std::vector<VarKey>* missing) const {
  Rat out = 0;
  for (const auto& [k, c] : terms) {
    auto it = assignment.find(k);
    if (it == assignment.end()) {
      if (missing) missing->push_back(k);
      continue;
    }
    out += c * it->second;
  }
  return out;
}

std::string rel_str(Rel r) {
  switch (r) {
    case Rel::Ge:
      return ">=";
    case Rel::Le:
      return "<=";
    case Rel::Lt:
      return "<";
  }
  throw Error("unreachable");
}

Rel rel_parse(std::string_view s) {
  if (s == ">=") return Rel::Ge;
  if (s == "<=") return Rel::Le;
  if (s == "<") return Rel::Lt;
  throw InputError("unknown relation \"" + std::string(s) + "\"");
}

std::vector<VarKey> enumerate_variables(const Alphabet& a) {
  std::vector<VarKey> out;
  out.push_back(VarKey::x0());
  std::vector<LetterSet> subsets;
  for (uint32_t bits = 0; bits < (1u << a.size()); ++bits)
    subsets.emplace_back(bits);
  std::sort(subsets.begin(), subsets.end());
  for (LetterSet s : subsets)
    for (int i = 0; i < a.size(); ++i)
      if (!s.test(i)) out.push_back(VarKey::x(s, i));
  for (LetterSet s : subsets) out.push_back(VarKey::y(s));
  out.push_back(VarKey::p1());
  out.push_back(VarKey::p2());
  return out;
}

LinExpr expression_for(const Alphabet& a, const BandWord& v) {
  LinExpr e;
  e.add(VarKey::x0(), 1);
  LetterSet prefix;
  for (int i = 0; i < v.size(); ++i) {
    int li = a.index_checked(v.at(i));
    e.add(VarKey::x(prefix, li), 1);
    prefix = prefix.with(li);
  }
  e.add(VarKey::y(prefix), 1);
  return e;
}

InequalitySystem build_system(const R1Language& language) {
  const Alphabet& a = language.alphabet();
  InequalitySystem sys;
  sys.language = language;
  sys.variables = enumerate_variables(a);
  sys.M = a.size() + 2;
  for (const BandWord& v : enumerate_band(a)) {
    Constraint c;
    c.lhs = expression_for(a, v);
    c.label = v.str();
    if (language.accepts_band(v)) {
      c.rel = Rel::Ge;
      c.rhs.add(VarKey::p2(), 1);
    } else {
      c.rel = Rel::Le;
      c.rhs.add(VarKey::p1(), 1);
    }
    sys.constraints.push_back(std::move(c));
  }
  Constraint strict;
  strict.lhs.add(VarKey::p1(), 1);
  strict.rel = Rel::Lt;
  strict.rhs.add(VarKey::p2(), 1);
  sys.constraints.push_back(std::move(strict));
  return sys;
}

AssignmentReport validate_assignment(const InequalitySystem& sys,
                                     const std::map<VarKey, Rat>& assignment) {
  AssignmentReport rep;
  std::vector<VarKey> missing;
  rep.all_satisfied = true;
  for (const Constraint& c : sys.constraints) {
    AssignmentReport::Row row;
    row.label = c.label;
    row.rel = c.rel;
    row.lhs = c.lhs.eval(assignment, &missing);
    row.rhs = c.rhs.eval(assignment, &missing);
    switch (c.rel) {
      case Rel::Ge:
        row.satisfied = row.lhs >= row.rhs;
        break;
      case Rel::Le:
        row.satisfied = row.lhs <= row.rhs;
        break;
      case Rel::Lt:
        row.satisfied = row.lhs < row.rhs;
        break;
    }
    rep.all_satisfied = rep.all_satisfied && row.satisfied;
    rep.rows.push_back(std::move(row));
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  rep.defaulted = std::move(missing);
  return rep;
}

}  // namespace qfa
