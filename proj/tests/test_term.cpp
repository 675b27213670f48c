#include <doctest.h>

#include "helpers.hpp"

using namespace cube;
using namespace cube::testing;

TEST_CASE("shift adjusts free indices above the cutoff") {
  CHECK(term_eq(shift(var_term(0), 1, 0), var_term(1)));
  CHECK(term_eq(shift(abs_term("x", prop_term(), var_term(0)), 1, 0),
                abs_term("x", prop_term(), var_term(0))));
  CHECK(term_eq(shift(app_term(var_term(0), var_term(2)), 3, 1),
                app_term(var_term(0), var_term(5))));
  CHECK_THROWS_AS(shift(var_term(0), -1, 0), std::logic_error);
}

TEST_CASE("subst replaces the target index and decrements those above") {
  TermPtr a = pt("Prop");
  CHECK(term_eq(subst(var_term(0), 0, a), a));
  CHECK(term_eq(subst(app_term(var_term(1), var_term(0)), 0, a),
                app_term(var_term(0), a)));
  // the substituted value is shifted under binders
  CHECK(term_eq(subst(abs_term("_", prop_term(), var_term(1)), 0, var_term(0)),
                abs_term("_", prop_term(), var_term(1))));
}

TEST_CASE("occurs_free sees through binders and domains") {
  CHECK(occurs_free(var_term(0), 0));
  CHECK_FALSE(occurs_free(abs_term("x", prop_term(), var_term(0)), 0));
  CHECK(occurs_free(abs_term("x", var_term(0), var_term(1)), 0));
}

TEST_CASE("well_scoped bounds indices by binders plus context length") {
  CHECK(well_scoped(pt("[x:Prop] x"), 0));
  CHECK_FALSE(well_scoped(var_term(0), 0));
  CHECK(well_scoped(var_term(2), 3));
}

TEST_CASE("strict subterms of sorts and variables are empty") {
  CHECK(strict_subterms({Context{}, prop_term()}).empty());
  Context ctx = g0();
  CHECK(strict_subterms({ctx, pt("f", ctx)}).empty());
}

TEST_CASE("strict subterms of an application are both children") {
  Context ctx = g0();
  auto subs = strict_subterms({ctx, pt("(f a)", ctx)});
  REQUIRE(subs.size() == 2);
  CHECK(subs.count({ctx, pt("f", ctx)}));
  CHECK(subs.count({ctx, pt("a", ctx)}));
}

TEST_CASE("strict subterms under a binder live in the extended context") {
  Context ctx = g0();
  auto subs = strict_subterms({ctx, pt("[x:P] (f x)", ctx)});
  Context ext = ctx.extended("x", pt("P", ctx));
  REQUIRE(subs.size() == 4);
  CHECK(subs.count({ctx, pt("P", ctx)}));
  CHECK(subs.count({ext, pt("(f x)", ext)}));
  CHECK(subs.count({ext, pt("f", ext)}));
  CHECK(subs.count({ext, pt("x", ext)}));
}

TEST_CASE("labeled term equality compares contexts entry-wise") {
  Context ctx = g0();
  Context other = parse_context("P : Prop; f : P -> P; b : P");  // same types
  Context shorter = parse_context("P : Prop");
  CHECK(LabeledTerm{ctx, pt("P", ctx)} == LabeledTerm{other, pt("P", other)});
  CHECK_FALSE(LabeledTerm{ctx, pt("P", ctx)} == LabeledTerm{shorter, pt("P", shorter)});
}

TEST_CASE("context lookup shifts the declared type into the full context") {
  Context ctx = g0();
  // f's declared type P -> P mentions P at entry 0; at the use site P = Var 2
  CHECK(term_eq(ctx.lookup(1), arrow_term(var_term(2), var_term(2))));
  CHECK_THROWS_AS(ctx.lookup(5), TypeError);
}

TEST_CASE("substitution agrees with the named-variable oracle") {
  RawGen gen(20250810);
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    TermPtr body = gen.term(3, 4);   // scope: x innermost, then v1 v0
    TermPtr value = gen.term(2, 3);  // scope: v1 v0
    TermPtr mine = subst(body, 0, value);

    int fresh = 0;
    std::vector<std::string> outer = {"v0", "v1"};
    std::vector<std::string> with_x = outer;
    with_x.push_back("subject");
    NPtr nbody = to_named(body, with_x, fresh);
    NPtr nvalue = to_named(value, outer, fresh);
    NPtr nresult = nsubst(nbody, "subject", nvalue, fresh);
    TermPtr reference = from_named(nresult, outer);

    CAPTURE(print_term(body));
    CAPTURE(print_term(value));
    CHECK(term_eq(mine, reference));
    ++checked;
  }
  CHECK(checked == 600);
}

TEST_CASE("shift and subst commute") {
  RawGen gen(99);
  for (int i = 0; i < 400; ++i) {
    TermPtr t = gen.term(3, 4);
    TermPtr u = gen.term(2, 3);
    std::int64_t n = 1 + static_cast<std::int64_t>(i % 3);
    TermPtr lhs = shift(subst(t, 0, u), n, 0);
    TermPtr rhs = subst(shift(t, n, 1), 0, shift(u, n, 0));
    CHECK(term_eq(lhs, rhs));
  }
}

TEST_CASE("free occurrences after substitution come from the body or the value") {
  RawGen gen(7);
  for (int i = 0; i < 400; ++i) {
    TermPtr t = gen.term(3, 4);
    TermPtr u = gen.term(2, 3);
    TermPtr r = subst(t, 0, u);
    for (std::size_t k = 0; k < 4; ++k)
      if (occurs_free(r, k)) CHECK((occurs_free(t, k + 1) || occurs_free(u, k)));
  }
}

TEST_CASE("strict subterm sets are finite and well-scoped") {
  RawGen gen(13);
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.term(2, 4);
    Context ctx = parse_context("Q : Prop; q : Q");
    if (!well_scoped(t, ctx.size())) continue;
    for (const auto& sub : strict_subterms({ctx, t}))
      CHECK(well_scoped(sub.term, sub.ctx.size()));
  }
}
