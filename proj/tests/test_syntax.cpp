#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "csets/syntax.hpp"

using namespace csets;

namespace {

// Parse the printed form back and compare up to renaming of binders.
void roundtrips(const Term& t) {
  CAPTURE(print_term(t));
  CHECK(alpha_equal(parse_term(print_term(t)), t));
}

}  // namespace

TEST_CASE("type printing and parsing are mutually inverse") {
  for (const char* src : {
           "Bool", "BoolCo", "Unit",
           "Bool -> Bool -> Bool",          // arrows nest to the right
           "(Bool -> Bool) -> Bool",
           "Bool * Unit + Bool",            // product binds tighter than sum
           "T Bool", "Box (Bool -> Bool)", "T[H] Bool", "Seal[H] Bool",
           "T Bool * Bool",                 // modal prefixes bind tighter than product
           "Box Bool -> Seal[L] (Bool + Unit)",
       }) {
    Type t = parse_type(src);
    CHECK(parse_type(print_type(t)) == t);
  }
  CHECK(parse_type("Bool -> Bool -> Bool") ==
        Type::arrow(Type::boolean(), Type::arrow(Type::boolean(), Type::boolean())));
  CHECK(parse_type("Bool * Unit + Bool") ==
        Type::sum(Type::prod(Type::boolean(), Type::unit()), Type::boolean()));
  CHECK(parse_type("T Bool * Bool") ==
        Type::prod(Type::monad(Type::boolean()), Type::boolean()));
  CHECK(parse_type("T[H] Bool").level() == Label("H"));
}

TEST_CASE("every term constructor survives a print-parse roundtrip") {
  Type b = Type::boolean();
  roundtrips(Term::tt());
  roundtrips(Term::ff());
  roundtrips(Term::unit());
  roundtrips(Term::lam("x", b, Term::var("x")));
  roundtrips(Term::app(Term::lam("x", b, Term::var("x")), Term::tt()));
  roundtrips(Term::pair(Term::tt(), Term::unit()));
  roundtrips(Term::fst(Term::pair(Term::tt(), Term::ff())));
  roundtrips(Term::snd(Term::pair(Term::tt(), Term::ff())));
  roundtrips(Term::inl(Term::tt()));
  roundtrips(Term::inr(Term::unit()));
  roundtrips(Term::case_of(Term::inl(Term::tt()), "x", Term::var("x"), "y", Term::ff()));
  roundtrips(Term::if_then_else(Term::tt(), Term::ff(), Term::tt()));
  roundtrips(Term::ret(Term::tt()));
  roundtrips(Term::let_ret("x", Term::ret(Term::tt()), Term::ret(Term::var("x"))));
  roundtrips(Term::box(Term::tt()));
  roundtrips(Term::let_box("x", Term::box(Term::tt()), Term::var("x")));
  roundtrips(Term::ret_lev(Label("H"), Term::tt()));
  roundtrips(Term::seal(Label("H"), Term::tt()));
  roundtrips(Term::unseal(Label("H"), Term::seal(Label("H"), Term::tt())));
  // a deliberately gnarly nesting
  roundtrips(parse_term("\\f : Bool -> T Bool. let x = f tt in ret (x, unseal[L] (seal[L] ff))"));
}

TEST_CASE("application is left-associative and lambda bodies extend right") {
  Term t = parse_term("\\f : Bool -> Bool -> Bool. f tt ff");
  const Term& body = t.child(0);
  CHECK(body.kind() == Term::Kind::App);
  CHECK(body.child(0).kind() == Term::Kind::App);
  CHECK(body.child(0).child(1).kind() == Term::Kind::TT);
  CHECK(body.child(1).kind() == Term::Kind::FF);
  // the annotation consumed the arrow type; the body is just the application
  CHECK(t.annotation() == parse_type("Bool -> Bool -> Bool"));

  // prefix operators take a single atom: `ret f x` applies `ret f` to `x`
  Term r = parse_term("\\f : Bool -> Bool. (\\g : T (Bool -> Bool). tt) (ret f)");
  CHECK(r.child(0).kind() == Term::Kind::App);
}

TEST_CASE("comments and whitespace are skipped") {
  Term t = parse_term("-- leading note\n  if tt -- trailing\n  then ff\n  else tt");
  CHECK(t.kind() == Term::Kind::If);
  CHECK(t.child(0).kind() == Term::Kind::TT);
}

TEST_CASE("parse errors carry line and column and name the expectation") {
  try {
    parse_term("if tt then ff");
    FAIL("expected a parse failure");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() == 14);
    CHECK(e.expected() == "'else'");
  }
  try {
    parse_term("\\x : Bool.\n  let = tt in x");
    FAIL("expected a parse failure");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.expected() == "a variable to bind");
  }
  // reserved words cannot be variable names
  CHECK_THROWS_AS(parse_term("\\case : Bool. tt"), ParseError);
  CHECK_THROWS_AS(parse_term("seal tt"), ParseError);    // missing level
  CHECK_THROWS_AS((void)parse_type("T["), ParseError);
  CHECK_THROWS_AS(parse_term("tt tt tt )"), ParseError);  // trailing junk
}

TEST_CASE("substitution avoids capture by freshening binders") {
  Term body = parse_term("\\x : Bool. y");
  Term replaced = substitute(body, "y", Term::var("x"));
  // the free x must stay free: the lambda binder is renamed away from it
  CHECK(free_vars(replaced) == std::set<std::string>({"x"}));
  CHECK(replaced.name() != "x");
  CHECK(alpha_equal(replaced, parse_term("\\z : Bool. x")));
  // substituting under an equally-named binder is a no-op
  Term shadowed = substitute(parse_term("\\y : Bool. y"), "y", Term::tt());
  CHECK(alpha_equal(shadowed, parse_term("\\y : Bool. y")));
  // straightforward replacement elsewhere
  CHECK(alpha_equal(substitute(parse_term("(y, y)"), "y", Term::tt()),
                    parse_term("(tt, tt)")));
}

TEST_CASE("single steps contract exactly the advertised redexes") {
  auto steps_to = [](const char* from, const char* to) {
    auto stepped = reduce_step(parse_term(from));
    REQUIRE(stepped.has_value());
    CHECK(alpha_equal(*stepped, parse_term(to)));
  };
  steps_to("(\\x : Bool. x) tt", "tt");
  steps_to("fst (tt, ff)", "tt");
  steps_to("snd (tt, ff)", "ff");
  steps_to("if tt then ff else tt", "ff");
  steps_to("if ff then ff else tt", "tt");
  steps_to("case inl tt of inl x => x | inr y => ff", "tt");
  steps_to("case inr ff of inl x => tt | inr y => y", "ff");
  steps_to("let x = ret tt in ret x", "ret tt");
  steps_to("let x = ret[H] tt in ret[H] x", "ret[H] tt");
  steps_to("let box x = box tt in x", "tt");
  steps_to("unseal[H] (seal[H] tt)", "tt");

  // non-redexes stay put
  CHECK_FALSE(reduce_step(parse_term("\\x : Bool. x")).has_value());
  CHECK_FALSE(reduce_step(parse_term("ret tt")).has_value());
  // unsealing at the wrong level is stuck, not an escape hatch
  CHECK_FALSE(reduce_step(parse_term("unseal[L] (seal[H] tt)")).has_value());
}

TEST_CASE("reduction goes under binders and picks the leftmost-outermost redex") {
  Term t = parse_term("\\x : Bool. (\\y : Bool. y) x");
  CHECK(alpha_equal(normalize(t), parse_term("\\x : Bool. x")));
  // outermost first: the if-redex fires before the inner beta-redex
  Term lo = parse_term("if tt then tt else (\\x : Bool. x) ff");
  auto first = reduce_step(lo);
  REQUIRE(first.has_value());
  CHECK(alpha_equal(*first, Term::tt()));
}

TEST_CASE("normalization runs out of fuel on divergent terms") {
  Term omega = parse_term("(\\x : Bool. x x) (\\x : Bool. x x)");
  CHECK_THROWS_AS(normalize(omega, 50), FuelExhausted);
  try {
    normalize(omega, 50);
  } catch (const FuelExhausted& e) {
    CHECK(e.steps() == 50);
  }
  // well-behaved terms normalize long before the default budget
  CHECK(alpha_equal(normalize(parse_term("(\\x : Bool. (x, x)) (fst (tt, ff))")),
                    parse_term("(tt, tt)")));
}

TEST_CASE("alpha equivalence ignores binder names and nothing else") {
  CHECK(alpha_equal(parse_term("\\x : Bool. x"), parse_term("\\y : Bool. y")));
  CHECK(alpha_equal(parse_term("let box a = box tt in a"),
                    parse_term("let box b = box tt in b")));
  CHECK_FALSE(alpha_equal(parse_term("\\x : Bool. x"), parse_term("\\x : Unit. x")));
  CHECK_FALSE(alpha_equal(parse_term("\\x : Bool. x"), parse_term("\\x : Bool. tt")));
  CHECK_FALSE(alpha_equal(parse_term("seal[H] tt"), parse_term("seal[L] tt")));
  CHECK_FALSE(alpha_equal(Term::var("x"), Term::var("y")));  // free names matter
}

TEST_CASE("free variables and node counts") {
  Term t = parse_term("\\x : Bool. (x, (y, z))");
  CHECK(free_vars(t) == std::set<std::string>({"y", "z"}));
  CHECK(free_vars(Term::tt()).empty());
  CHECK(free_vars(parse_term("let x = ret y in ret x")) == std::set<std::string>({"y"}));
  CHECK(term_size(Term::tt()) == 1);
  CHECK(term_size(parse_term("(tt, ff)")) == 3);
  CHECK(term_size(parse_term("\\x : Bool. x")) == 2);
  CHECK(term_size(parse_term("if tt then ff else unit")) == 4);
}
