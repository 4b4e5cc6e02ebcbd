#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "laws.hpp"
#include "rvnli/error.hpp"
#include "rvnli/logic/parser.hpp"
#include "rvnli/logic/render.hpp"
#include "rvnli/logic/signature.hpp"
#include "rvnli/logic/substitution.hpp"

using namespace rvnli;
using namespace rvnli::logic;

namespace {

Formula tmpl(std::string_view s) { return parse_formula(s, ParseMode::Template); }
Formula closed(std::string_view s) { return parse_formula(s); }

const Term x = Term::variable("x", Sort::Entity);
const Term y = Term::variable("y", Sort::Entity);
const Term z = Term::variable("z", Sort::Entity);
const Term e1 = Term::variable("e1", Sort::Event);
const Term e2 = Term::variable("e2", Sort::Event);

Substitution theta1() {
  Substitution t;
  t.bind_symbol("P", "ForestFire");
  t.bind_symbol("Q", "Deer");
  t.bind_symbol("R", "Woodland");
  return t;
}

Substitution theta2() {
  Substitution t;
  t.bind_formula("S", Formula::disj(Formula::pred("Die", {e1}), Formula::pred("Leave", {e2})));
  return t;
}

Substitution theta3() {
  Substitution t;
  t.bind_rewrite(Formula::pred("Die", {e1}), tmpl("Die(e1) & Agent(e1, y)"));
  t.bind_rewrite(Formula::pred("Leave", {e2}), tmpl("Leave(e2) & Agent(e2, y) & Patient(e2, z)"));
  return t;
}

}  // namespace

TEST_CASE("template parse of the forest-fire sentence") {
  Formula f = tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> S");
  CHECK(has_placeholders(f));
  CHECK(placeholders(f) == std::vector<std::string>{"S"});
  CHECK(f.kind() == Formula::Kind::Forall);
  CHECK(f.bound() == x);
  const Formula& body = f.body().body().body();
  REQUIRE(body.kind() == Formula::Kind::Implies);
  CHECK(body.rhs() == Formula::placeholder("S"));
  CHECK(body.lhs().lhs() == Formula::pred("ForestFire", {x}));
}

TEST_CASE("smallest template") {
  Formula f = tmpl("P");
  CHECK(f.is_placeholder());
  CHECK(f.symbol() == "P");
  CHECK(f.args().empty());
}

TEST_CASE("closed parse with event variable") {
  Formula f = closed("forall x. (exists e. Die(e) & Agent(e,x))");
  CHECK(is_closed(f));
  CHECK(f.body().bound() == Term::variable("e", Sort::Event));
  CHECK(parse_formula(render_formula(f)) == f);
  CHECK(render_formula(f) == "forall x. exists e. Die(e) & Agent(e, x)");
}

TEST_CASE("unicode and ascii connectives agree") {
  CHECK(closed("∀x. Human(x) → Mammal(x)") == closed("forall x. Human(x) -> Mammal(x)"));
  CHECK(closed("¬A ∧ B ∨ C ↔ D") == closed("~A & B | C <-> D"));
  CHECK(closed("A ⟶ B ⟷ C") == closed("A --> B <--> C"));
}

TEST_CASE("precedence and associativity") {
  Formula f = closed("A -> B -> C");
  CHECK(f == Formula::implies(closed("A"), Formula::implies(closed("B"), closed("C"))));
  Formula g = closed("A | B & C");
  CHECK(g.kind() == Formula::Kind::Or);
  CHECK(g.rhs().kind() == Formula::Kind::And);
  CHECK(closed("A & B <-> C").kind() == Formula::Kind::Iff);
  // Quantifier bodies extend to the right.
  Formula q = closed("forall x. Red(x) -> Big(x)");
  CHECK(q.kind() == Formula::Kind::Forall);
}

TEST_CASE("sort annotations and inference") {
  Formula f = closed("forall v:event. Run(v)");
  CHECK(f.bound().sort == Sort::Event);
  CHECK(render_formula(f) == "forall v:event. Run(v)");
  Formula g = closed("exists e x. Agent(e, x)");
  CHECK(g.bound().sort == Sort::Event);
  CHECK(g.body().bound().sort == Sort::Entity);
  Signature sig = role_signature();
  ParseOptions o;
  o.signature = &sig;
  Formula h = parse_formula("forall w. exists k. Agent(k, w)", ParseMode::Closed, o);
  CHECK(h.body().bound().sort == Sort::Event);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(closed("forall x. (Red(x)"), SyntaxError);
  try {
    closed("A & & B");
    FAIL("expected syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(closed("?P & A"), PlaceholderInClosedFormula);
  {
    Signature roles = role_signature();
    ParseOptions o;
    o.signature = &roles;
    CHECK_THROWS_AS(parse_formula("exists e:event x. Agent(x, e)", ParseMode::Closed, o), SortError);
  }
  CHECK_THROWS_AS(closed("Red(a) & Red(a, b)"), SortError);
  try {
    closed("forall x:event. Big(x) & exists y. Big(y)");
    FAIL("expected sort error");
  } catch (const SortError& e) {
    CHECK(e.symbol() == "Big");
  }
}

TEST_CASE("entity substitution, forest fire step 1") {
  Formula phi0 = tmpl("forall x y z. P(x) & Q(y) & R(z) -> S");
  Formula phi1 = apply_substitution(phi0, theta1());
  CHECK(phi1 == tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> S"));
  CHECK(render_formula(phi1) == "forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> S");
}

TEST_CASE("event and role substitution") {
  Formula phi0 = tmpl("forall x y z. P(x) & Q(y) & R(z) -> S");
  Formula phi2 = apply_substitution(apply_substitution(phi0, theta1()), theta2());
  CHECK(phi2 == tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> Die(e1) | Leave(e2)"));
  Formula matrix = apply_substitution(phi2, theta3());
  CHECK(matrix == tmpl("forall x y z. ForestFire(x) & Deer(y) & Woodland(z) -> "
                       "(Die(e1) & Agent(e1, y)) | (Leave(e2) & Agent(e2, y) & Patient(e2, z))"));
  // Composition is sequential left to right.
  CHECK(apply_substitution(phi0, compose(theta1(), compose(theta2(), theta3()))) == matrix);
  CHECK(apply_substitution(phi0, compose(compose(theta1(), theta2()), theta3())) == matrix);
}

TEST_CASE("substitution is simultaneous within one layer") {
  Substitution swap;
  swap.bind_formula("P", Formula::placeholder("Q"));
  swap.bind_formula("Q", Formula::placeholder("P"));
  CHECK(apply_substitution(tmpl("P & Q"), swap) == tmpl("Q & P"));
  Substitution rw;
  rw.bind_rewrite(closed("Run(e)"), closed("Run(e) & Leave(e)"));
  rw.bind_rewrite(closed("Leave(e)"), closed("Stay(e)"));
  CHECK(apply_substitution(closed("Run(e)"), rw) == closed("Run(e) & Leave(e)"));
}

TEST_CASE("apply errors and unused bindings") {
  Substitution bad;
  bad.bind("P", Term::constant("c", Sort::Entity));
  CHECK_THROWS_AS(apply_substitution(tmpl("P(x)"), bad), IllFormedReplacement);
  Substitution dup;
  dup.bind_symbol("P", "A");
  CHECK_THROWS_AS(dup.bind_symbol("P", "B"), IllFormedReplacement);

  Signature sig;
  sig.declare("Run", {Sort::Event});
  Substitution wrong;
  wrong.bind_symbol("P", "Run");
  CHECK_THROWS_AS(apply_substitution(tmpl("P(x)"), wrong, &sig), SortError);

  Substitution extra = theta1();
  extra.bind_symbol("T", "Tree");
  ApplyReport rep = apply_with_report(tmpl("P(x)"), extra);
  CHECK(rep.result == tmpl("ForestFire(x)"));
  CHECK(rep.unused == std::vector<std::string>{"Q", "R", "T"});
}

TEST_CASE("term substitution and capture") {
  Substitution t;
  t.bind_term("x", Term::constant("a", Sort::Entity));
  CHECK(apply_substitution(tmpl("Red(x) & forall x. Big(x)"), t) == parse_formula("Red(a) & forall x. Big(x)"));
  // Free template variables are captured by enclosing binders on purpose (θ3 relies on it).
  Formula captured = apply_substitution(tmpl("forall y. S"), [] {
    Substitution s;
    s.bind_formula("S", tmpl("Deer(y)"));
    return s;
  }());
  CHECK(is_closed(captured));
}

TEST_CASE("render dialects") {
  Formula atom = Formula::pred("Chocolate", {x});
  CHECK(render_formula(atom, Dialect::IsabelleInner) == "Chocolate x");
  CHECK(render_formula(closed("forall x. Chocolate(x)"), Dialect::TptpFof) ==
        "![X]: (entity(X) => chocolate(X))");
  Formula ex1 = closed(
      "forall e x y z. Melting(e) <-> (Change(e) & Source(e, x) & Destination(e, y) & Solid(x) & Liquid(y) & "
      "IncreaseHeatEnergy(z) & By(e, z))");
  CHECK(render_formula(ex1, Dialect::IsabelleInner) ==
        "∀ e x y z. Melting e ⟷ (Change e ∧ Source e x ∧ Destination e y ∧ Solid x ∧ Liquid y ∧ "
        "IncreaseHeatEnergy z ∧ By e z)");
  CHECK_THROWS_AS(render_formula(tmpl("P(x)"), Dialect::TptpFof), DialectUnsupportedConstruct);
  CHECK_THROWS_AS(render_formula(tmpl("S"), Dialect::IsabelleInner), DialectUnsupportedConstruct);
  CHECK(tptp_functor("Chocolate") == "chocolate");
  CHECK(untptp_functor(tptp_functor("chocolate")) == "chocolate");
  CHECK(untptp_variable(tptp_variable("e1")) == "e1");
}

TEST_CASE("isabelle inner syntax parses back") {
  ParseOptions o;
  o.dialect = SyntaxDialect::Isabelle;
  Formula ex = closed("exists x e. Chocolate(x) & Melts(e) & Agent(e, x)");
  CHECK(parse_formula(render_formula(ex, Dialect::IsabelleInner), ParseMode::Closed, o) == ex);
}

TEST_CASE("property: canonical round trip over 1000 formulas") {
  auto r = testkit::canonical_round_trip(7, 1000);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("property: composition laws") {
  auto law = testkit::composition_law(11, 1000);
  INFO(law.first_failure);
  CHECK(law.ok());
  MESSAGE("single-layer compositions: " << law.merged << "/" << law.cases);
  CHECK(law.merged > 0);
  CHECK(law.merged < law.cases);
  auto assoc = testkit::composition_associativity(13, 1000);
  INFO(assoc.first_failure);
  CHECK(assoc.ok());
  auto id = testkit::identity_laws(17, 1000);
  INFO(id.first_failure);
  CHECK(id.ok());
}

TEST_CASE("property: sort preservation and disjoint idempotence") {
  auto s = testkit::sort_preservation(19, 1000);
  INFO(s.first_failure);
  CHECK(s.ok());
  auto d = testkit::disjoint_idempotence(23, 1000);
  INFO(d.first_failure);
  CHECK(d.ok());
}
