#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "qfa/rational.hpp"
#include "qfa/words.hpp"

namespace qfa {

enum class VarKind : uint8_t { X0 = 0, X = 1, Y = 2, P1 = 3, P2 = 4 };

/// Variable of the inequality system, keyed structurally: x0; x variables by
/// (prefix letter set, next letter); y variables by letter set; p1 and p2.
/// The structural key is exactly the s-variable equivalence class.
struct VarKey {
  VarKind kind = VarKind::X0;
  LetterSet set;    // X: prefix set; Y: the full letter set
  int8_t letter = -1;  // X only: alphabet index of the appended letter

  static VarKey x0() { return {VarKind::X0, LetterSet(), -1}; }
  static VarKey x(LetterSet prefix, int letter) {
    return {VarKind::X, prefix, static_cast<int8_t>(letter)};
  }
  static VarKey y(LetterSet s) { return {VarKind::Y, s, -1}; }
  static VarKey p1() { return {VarKind::P1, LetterSet(), -1}; }
  static VarKey p2() { return {VarKind::P2, LetterSet(), -1}; }

  bool operator==(const VarKey&) const = default;
  bool operator<(const VarKey& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (!(set == o.set)) return set < o.set;
    return letter < o.letter;
  }

  /// "x0", "x:{b}|a", "y:{a,b,c}", "p1", "p2".
  std::string str(const Alphabet& a) const;
  static VarKey parse(const Alphabet& a, std::string_view s);
};

/// Linear combination of variables with exact rational coefficients.
struct LinExpr {
  std::map<VarKey, Rat> terms;

  void add(const VarKey& k, const Rat& c);
  /// Missing variables evaluate to 0; they are appended to `missing` once.
  Rat eval(const std::map<VarKey, Rat>& assignment,
           std::vector<VarKey>* missing = nullptr) const;
  int size() const { return static_cast<int>(terms.size()); }
};

enum class Rel : uint8_t { Ge, Le, Lt };

std::string rel_str(Rel r);
Rel rel_parse(std::string_view s);

struct Constraint {
  LinExpr lhs;
  Rel rel = Rel::Le;
  LinExpr rhs;
  /// Band word that produced this constraint, or "" for p1 < p2.
  std::string label;
};

struct InequalitySystem {
  R1Language language;
  std::vector<VarKey> variables;  // canonical enumeration
  std::vector<Constraint> constraints;
  int M = 0;  // |A| + 2, max variable count of any left-hand side
};

/// Canonical variable enumeration for an alphabet: x0, the x keys by
/// (prefix level, prefix bits, letter), the y keys by (level, bits), p1, p2.
std::vector<VarKey> enumerate_variables(const Alphabet& a);

/// x0 + x_{v[1]} + ... + x_v + y_v; for the empty word just x0 + y_{}.
LinExpr expression_for(const Alphabet& a, const BandWord& v);

/// One constraint per element of F(A): >= p2 for accepted words, <= p1 for
/// the rest, plus the strict p1 < p2.
InequalitySystem build_system(const R1Language& language);

struct AssignmentReport {
  struct Row {
    std::string label;
    Rel rel;
    Rat lhs, rhs;
    bool satisfied;
  };
  std::vector<Row> rows;
  bool all_satisfied = false;
  std::vector<VarKey> defaulted;  // variables missing from the assignment
};

/// Evaluates every constraint exactly; missing variables default to 0.
AssignmentReport validate_assignment(const InequalitySystem& sys,
                                     const std::map<VarKey, Rat>& assignment);

}  // namespace qfa
