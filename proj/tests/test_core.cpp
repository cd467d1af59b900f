#include "doctest.h"

#include <random>

#include "conetree/base_class.hpp"
#include "conetree/codec.hpp"
#include "conetree/formula.hpp"
#include "conetree/structure.hpp"
#include "conetree/validate.hpp"

#include "generators.hpp"

using namespace conetree;
using conetree::testing::random_base_formula;
using conetree::testing::random_structure;

namespace {

DecoratedStructure parse(const std::string& text) {
  return parse_structure(text);
}

const char* kVee =
    "signature graph\n"
    "element r a b\n"
    "leq r a\nleq r b\n"
    "rel R r a b\nrel R r b a\n";

}  // namespace

TEST_CASE("meets are greatest common lower bounds") {
  DecoratedStructure s = parse(
      "signature equality\n"
      "element r p a b c\n"
      "leq r p\nleq r a\nleq r b\nleq r c\n"
      "leq p a\nleq p b\n");
  CHECK(*s.meet("a", "b") == "p");
  CHECK(*s.meet("a", "c") == "r");
  CHECK(*s.meet("a", "a") == "a");
  CHECK(*s.meet("r", "b") == "r");
  CHECK(*s.minimum() == "r");
  CHECK(s.meet_all({"a", "b", "c"}) == "r");
  CHECK(s.meet_all({"a", "b"}) == "p");
}

TEST_CASE("below sets of valid trees are chains and a minimum exists") {
  std::mt19937_64 rng(101);
  const BaseClass& base = base_by_name("equality");
  for (int trial = 0; trial < 50; ++trial) {
    DecoratedStructure s = random_structure(rng, base, 1 + rng() % 10);
    REQUIRE(validate(s, ValidateMode::kTreeOnly).ok());
    CHECK(s.minimum().has_value());
    for (const auto& e : s.elements()) {
      std::vector<std::string> chain = s.below(e);
      for (const auto& u : chain) {
        for (const auto& v : chain) CHECK(s.comparable(u, v));
      }
    }
  }
}

TEST_CASE("meet closure is small and idempotent") {
  std::mt19937_64 rng(202);
  const BaseClass& base = base_by_name("equality");
  for (int trial = 0; trial < 200; ++trial) {
    DecoratedStructure s = random_structure(rng, base, 1 + rng() % 12);
    std::size_t n = 1 + rng() % 6;
    std::vector<std::string> gens;
    for (std::size_t i = 0; i < n; ++i) {
      gens.push_back(s.elements()[rng() % s.size()]);
    }
    std::vector<std::string> closed = meet_closure_elements(s, gens);
    CHECK(closed.size() <= 2 * gens.size());
    CHECK(is_meet_closed(s, closed));
    CHECK(meet_closure_elements(s, closed) == closed);

    // One extra point closes with at most two new elements.
    std::vector<std::string> plus = closed;
    plus.push_back(s.elements()[rng() % s.size()]);
    CHECK(meet_closure_elements(s, plus).size() <= closed.size() + 2);
  }
}

TEST_CASE("maximal chains are the down-sets of maximal elements") {
  DecoratedStructure s = parse(
      "signature equality\n"
      "element r p a b\n"
      "leq r p\nleq r a\nleq r b\nleq p a\n");
  CHECK(s.maximal_elements() == std::vector<std::string>{"a", "b"});
  CHECK(s.below("a") == std::vector<std::string>{"p", "r"});  // id order
  CHECK(s.below("b") == std::vector<std::string>{"r"});
  CHECK(s.above("r") == std::vector<std::string>{"a", "b", "p"});
}

TEST_CASE("cone partition groups by meets above the center") {
  DecoratedStructure s = parse(kVee);
  ConeQuotient q = cone_partition(s, "r");
  REQUIRE(q.cones.size() == 2);
  CHECK(q.representative_of("a") == "a");
  CHECK(q.representative_of("b") == "b");
  CHECK(q.quotient.holds("R", {"a", "b"}));
  CHECK(q.quotient.holds("R", {"b", "a"}));
  CHECK_FALSE(q.quotient.holds("R", {"a", "a"}));
  CHECK(s.same_cone("r", "a", "a"));
  CHECK_FALSE(s.same_cone("r", "a", "b"));
}

TEST_CASE("cones at every center partition the elements above it") {
  std::mt19937_64 rng(303);
  const BaseClass& base = base_by_name("graph");
  for (int trial = 0; trial < 40; ++trial) {
    DecoratedStructure s = random_structure(rng, base, 2 + rng() % 9);
    for (const auto& c : s.elements()) {
      ConeQuotient q = cone_partition(s, c);
      std::size_t total = 0;
      for (const auto& cone : q.cones) {
        total += cone.size();
        for (const auto& u : cone) {
          CHECK(s.less(c, u));
          CHECK(s.same_cone(c, cone.front(), u));
        }
      }
      CHECK(total == s.above(c).size());
    }
  }
}

TEST_CASE("serialization round trips and is canonical") {
  DecoratedStructure s = parse(kVee);
  std::string text = serialize_structure(s);
  CHECK(parse_structure(text) == s);
  CHECK(serialize_structure(parse_structure(text)) == text);

  // Line order in the input does not matter.
  DecoratedStructure t = parse(
      "signature graph\n"
      "element b\n"
      "rel R r b a\n"
      "element a r\n"
      "leq r b\nleq r a\n"
      "rel R r a b\n");
  CHECK(t == s);
  CHECK(serialize_structure(t) == text);
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse("signature nosuch\n"), ParseError);
  CHECK_THROWS_AS(parse("element a a\n"), ParseError);
  CHECK_THROWS_AS(parse("leq a b\n"), ParseError);
  CHECK_THROWS_AS(parse("signature graph\nelement a\nrel R a\n"), ParseError);
  CHECK_THROWS_AS(parse("signature graph\nelement a b\nleq a b\nrel Q a b b\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("element ?a\n"), ParseError);
  CHECK_THROWS_AS(parse("signature equality\nelement a b\nrel = a b b\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("junk\n"), ParseError);
}

TEST_CASE("validator flags each axiom") {
  auto axiom_of = [](const std::string& text, ValidateMode mode) {
    ValidationReport r = validate(parse_structure(text), mode);
    REQUIRE_FALSE(r.ok());
    return r.violations.front().axiom;
  };

  // T2: a two-cycle.
  CHECK(axiom_of("element a b\nleq a b\nleq b a\n",
                 ValidateMode::kTreeOnly) == "T2");
  // T3: a gap in the declared order.
  CHECK(axiom_of("element a b c\nleq a b\nleq b c\n",
                 ValidateMode::kTreeOnly) == "T3");
  // T4: two incomparable points below one element.
  CHECK(axiom_of("element a b c d\nleq a c\nleq b c\nleq a d\nleq b d\n",
                 ValidateMode::kTreeOnly) == "T4");
  // T6: no common lower bound at all.
  CHECK(axiom_of("element a b\n", ValidateMode::kTreeOnly) == "T6");
  // OC: an entry not above the center.
  CHECK(axiom_of("signature graph\nelement r a b\nleq r a\nleq r b\n"
                 "rel R r a r\n",
                 ValidateMode::kUniversal) == "OC");
  // WD: half of a cone substitution missing.
  CHECK(axiom_of("signature graph\nelement r a b c\nleq r a\nleq r b\n"
                 "leq r c\nleq a b\nleq a c\n"
                 "rel R r b r\n",
                 ValidateMode::kUniversal) == "OC");
  CHECK(axiom_of("signature graph\nelement r p a b\nleq r p\nleq r a\n"
                 "leq r b\nleq p a\nleq p b\n"
                 "rel R r a p\nrel R r p a\n",
                 ValidateMode::kUniversal) == "WD");

  CHECK(validate(parse_structure(kVee), ValidateMode::kCones).ok());
}

TEST_CASE("cones mode runs the base checks on every quotient") {
  // An asymmetric edge at the root is fine for WD (singleton cones) but not
  // a graph.
  DecoratedStructure s = parse(
      "signature graph\n"
      "element r a b\n"
      "leq r a\nleq r b\n"
      "rel R r a b\n");
  CHECK(validate(s, ValidateMode::kUniversal).ok());
  ValidationReport r = validate(s, base_by_name("graph"),
                                ValidateMode::kCones);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().axiom.substr(0, 4) == "cone");
}

TEST_CASE("random structures from the generator validate in cones mode") {
  std::mt19937_64 rng(404);
  for (const auto* name : {"equality", "graph", "eq2"}) {
    const BaseClass& base = base_by_name(name);
    for (int trial = 0; trial < 30; ++trial) {
      DecoratedStructure s = random_structure(rng, base, 1 + rng() % 10);
      ValidationReport r = validate(s, base, ValidateMode::kCones);
      CHECK(r.ok());
    }
  }
}

TEST_CASE("induced substructures keep meets and stars") {
  std::mt19937_64 rng(505);
  const BaseClass& base = base_by_name("graph");
  for (int trial = 0; trial < 40; ++trial) {
    DecoratedStructure s = random_structure(rng, base, 3 + rng() % 8);
    std::vector<std::string> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(s.elements()[rng() % s.size()]);
    std::vector<std::string> sub = meet_closure_elements(s, gens);
    DecoratedStructure t = s.induced(sub);
    CHECK(validate(t, base, ValidateMode::kCones).ok());
    for (const auto& u : sub) {
      for (const auto& v : sub) {
        CHECK(s.leq(u, v) == t.leq(u, v));
        CHECK(*s.meet(u, v) == *t.meet(u, v));  // closure keeps meets
      }
    }
    for (const auto& [symbol, tuples] : t.stars()) {
      for (const auto& tuple : tuples) {
        std::vector<std::string> entries(tuple.begin() + 1, tuple.end());
        CHECK(s.star_holds(symbol, tuple[0], entries));
      }
    }
  }
}

TEST_CASE("star translation matches evaluation on the cone quotient") {
  std::mt19937_64 rng(606);
  std::vector<std::string> vars = {"v0", "v1", "v2"};
  for (const auto* name : {"graph", "eq2"}) {
    const BaseClass& base = base_by_name(name);
    for (int trial = 0; trial < 200; ++trial) {
      DecoratedStructure s = random_structure(rng, base, 2 + rng() % 8);
      std::string c = s.elements()[rng() % s.size()];
      std::vector<std::string> above = s.above(c);
      if (above.empty()) continue;

      ConeQuotient q = cone_partition(s, c);
      Assignment up, reps;
      for (const auto& v : vars) {
        const std::string& pick = above[rng() % above.size()];
        up[v] = pick;
        reps[v] = q.representative_of(pick);
      }
      BaseFormula psi = random_base_formula(rng, base.signature(), vars, 3);
      QfFormula starred = star_translate(psi, Term::element(c));
      CHECK(eval_base(q.quotient, psi, reps) == eval_qf(s, starred, up));
    }
  }
}

TEST_CASE("formula parser handles the documented syntax") {
  DecoratedStructure s = parse(kVee);
  CHECK(eval_qf(s, parse_formula("a ^ b = r"), {}));
  CHECK(eval_qf(s, parse_formula("r <= a & r < b"), {}));
  CHECK_FALSE(eval_qf(s, parse_formula("a <= b"), {}));
  CHECK(eval_qf(s, parse_formula("R*(r, a, b)"), {}));
  CHECK(eval_qf(s, parse_formula("!R*(r, a, a)"), {}));
  CHECK(eval_qf(s, parse_formula("=*(r, a, a) | true"), {}));
  CHECK_FALSE(eval_qf(s, parse_formula("=*(r, a, b) & true"), {}));
  CHECK(eval_qf(s, parse_formula("R*(?u, ?v, b)"), {{"u", "r"}, {"v", "a"}}));
  CHECK_THROWS_AS(eval_qf(s, parse_formula("R*(?u, a, b)"), {}), EvalError);
  CHECK_THROWS_AS(eval_qf(s, parse_formula("nosuch <= a"), {}), EvalError);
  CHECK_THROWS_AS(parse_formula("R*(a,"), EvalError);
  CHECK_THROWS_AS(parse_formula(""), EvalError);
}

TEST_CASE("equality lift is definitional") {
  DecoratedStructure s = parse(
      "signature equality\n"
      "element r a b c\n"
      "leq r a\nleq r b\nleq r c\nleq a b\nleq a c\n");
  // =*(r, b, c): both strictly above r and meeting strictly above r.
  CHECK(eval_qf(s, parse_formula("=*(r, b, c)"), {}));
  CHECK(eval_qf(s, parse_formula("=*(a, b, b)"), {}));
  CHECK_FALSE(eval_qf(s, parse_formula("=*(a, b, c)"), {}));  // b ^ c = a
  CHECK_FALSE(eval_qf(s, parse_formula("=*(b, b, c)"), {}));
}
