#include <doctest.h>

#include <sstream>

#include "qfa/io.hpp"

using namespace qfa;

namespace {

std::string expr_str(const LinExpr& e, const Alphabet& a) {
  std::string out;
  for (const auto& [k, c] : e.terms) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += rat_str(c) + "*";
    out += k.str(a);
  }
  return out;
}

}  // namespace

TEST_CASE("expressions follow the prefix chain") {
  Alphabet a("abc");
  LinExpr bac = expression_for(a, make_band_word(a, "bac"));
  CHECK(expr_str(bac, a) == "x0 + x:{}|b + x:{b}|a + x:{a,b}|c + y:{a,b,c}");
  LinExpr ab = expression_for(a, make_band_word(a, "ab"));
  CHECK(expr_str(ab, a) == "x0 + x:{}|a + x:{a}|b + y:{a,b}");
  LinExpr eps = expression_for(a, make_band_word(a, ""));
  CHECK(expr_str(eps, a) == "x0 + y:{}");
}

TEST_CASE("s-variable equivalence: same structural keys across words") {
  Alphabet a("abc");
  LinExpr abc = expression_for(a, make_band_word(a, "abc"));
  LinExpr bac = expression_for(a, make_band_word(a, "bac"));
  VarKey shared_x = VarKey::x(LetterSet(0b011), 2);  // x:{a,b}|c
  VarKey shared_y = VarKey::y(LetterSet(0b111));
  CHECK(abc.terms.count(shared_x) == 1);
  CHECK(bac.terms.count(shared_x) == 1);
  CHECK(abc.terms.count(shared_y) == 1);
  CHECK(bac.terms.count(shared_y) == 1);
}

TEST_CASE("system shape for {ab,bac} over {a,b,c}") {
  Alphabet a("abc");
  R1Language lang(a, {"ab", "bac"});
  InequalitySystem sys = build_system(lang);
  CHECK(sys.M == 5);
  CHECK(sys.variables.size() == 23);  // 1 + 12 x + 8 y + p1 + p2
  CHECK(sys.constraints.size() == 17);

  int ge = 0, le = 0, lt = 0;
  for (const Constraint& c : sys.constraints) {
    if (c.rel == Rel::Ge) ++ge;
    if (c.rel == Rel::Le) ++le;
    if (c.rel == Rel::Lt) ++lt;
  }
  CHECK(ge == 2);
  CHECK(le == 14);
  CHECK(lt == 1);
  CHECK(sys.constraints.back().rel == Rel::Lt);

  // every expression has |v| + 2 nonzero terms, at most M
  for (const Constraint& c : sys.constraints) {
    if (c.rel == Rel::Lt) continue;
    CHECK(c.lhs.size() == static_cast<int>(c.label.size()) + 2);
    CHECK(c.lhs.size() <= sys.M);
  }
}

TEST_CASE("expressions sharing a y variable have the same size") {
  Alphabet a("abc");
  R1Language lang(a, {"ab"});
  InequalitySystem sys = build_system(lang);
  std::map<VarKey, int> size_of_y;
  for (const Constraint& c : sys.constraints) {
    if (c.rel == Rel::Lt) continue;
    for (const auto& [k, coef] : c.lhs.terms) {
      (void)coef;
      if (k.kind != VarKind::Y) continue;
      auto [it, fresh] = size_of_y.emplace(k, c.lhs.size());
      if (!fresh) CHECK(it->second == c.lhs.size());
    }
  }
  CHECK(size_of_y.size() == 8);
}

TEST_CASE("empty language over {a}") {
  Alphabet a("a");
  R1Language lang(a, {});
  InequalitySystem sys = build_system(lang);
  REQUIRE(sys.constraints.size() == 3);
  CHECK(sys.constraints[0].label == "");
  CHECK(sys.constraints[0].rel == Rel::Le);
  CHECK(sys.constraints[1].label == "a");
  CHECK(sys.constraints[1].rel == Rel::Le);
  CHECK(sys.constraints[2].rel == Rel::Lt);
}

TEST_CASE("paper assignments validate exactly") {
  Alphabet a("abc");

  R1Language l1(a, {"ab"});
  InequalitySystem s1 = build_system(l1);
  std::map<VarKey, Rat> w1 = {{VarKey::x(LetterSet(0), 0), Rat(1, 2)},
                              {VarKey::y(LetterSet(0b011)), Rat(1, 2)},
                              {VarKey::p1(), Rat(1, 2)},
                              {VarKey::p2(), Rat(1)}};
  AssignmentReport r1 = validate_assignment(s1, w1);
  CHECK(r1.all_satisfied);
  CHECK(!r1.defaulted.empty());  // unset variables default to 0 with a warning

  R1Language l2(a, {"bac"});
  InequalitySystem s2 = build_system(l2);
  std::map<VarKey, Rat> w2 = {{VarKey::x(LetterSet(0), 1), Rat(1, 2)},
                              {VarKey::x(LetterSet(0b011), 2), Rat(1, 2)},
                              {VarKey::p1(), Rat(1, 2)},
                              {VarKey::p2(), Rat(1)}};
  CHECK(validate_assignment(s2, w2).all_satisfied);

  // all-zero assignment violates exactly the strict constraint
  AssignmentReport zero = validate_assignment(s1, {});
  CHECK_FALSE(zero.all_satisfied);
  int violated = 0;
  for (const auto& row : zero.rows)
    if (!row.satisfied) {
      ++violated;
      CHECK(row.rel == Rel::Lt);
    }
  CHECK(violated == 1);
}

TEST_CASE("system serialization is deterministic") {
  Alphabet a("abc");
  R1Language lang(a, {"ab", "bac"});
  std::string one = system_to_json(build_system(lang)).dump();
  std::string two = system_to_json(build_system(lang)).dump();
  CHECK(one == two);
  CHECK(one.find("\"x:{b}|a\"") != std::string::npos);
  CHECK(one.find("\"y:{a,b,c}\"") != std::string::npos);
}

TEST_CASE("variable keys round-trip through strings") {
  Alphabet a("abc");
  for (const VarKey& v : enumerate_variables(a))
    CHECK(VarKey::parse(a, v.str(a)) == v);
  CHECK_THROWS_AS(VarKey::parse(a, "x:{a}|a"), InputError);
  CHECK_THROWS_AS(VarKey::parse(a, "q7"), InputError);
}
