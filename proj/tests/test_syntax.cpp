#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "klm/language.hpp"
#include "klm/parser.hpp"

using namespace klm;

namespace {

Formula P(const char* s) { return parse_formula(s); }
Formula A(const char* s) { return Formula::atom(s); }

bool has_violation(Formula f, Logic l) { return !validate_language(f, l, Layer::Calculus).empty(); }

}  // namespace

TEST_CASE("parse_formula builds the expected trees") {
    CHECK(P("adult |~ worker") == Formula::cond(A("adult"), A("worker")));
    CHECK(P("~(a |~ ~r)") == Formula::neg(Formula::cond(A("a"), Formula::neg(A("r")))));
    CHECK(P("a & b | c -> d") == Formula::implies(Formula::disj(Formula::conj(A("a"), A("b")), A("c")), A("d")));
    CHECK(P("a -> b -> c") == Formula::implies(A("a"), Formula::implies(A("b"), A("c"))));
    CHECK(P("a & b & c") == Formula::conj(Formula::conj(A("a"), A("b")), A("c")));
    CHECK(P("~~a") == Formula::neg(Formula::neg(A("a"))));
    CHECK(P("[]~a") == Formula::box_neg(A("a")));
    CHECK(P("[L]a") == Formula::lmod(A("a")));
}

TEST_CASE("parse_formula rejects conditionals under conditionals") {
    CHECK_THROWS_AS(P("(p |~ q) |~ r"), ParseError);
    CHECK_THROWS_AS(P("p |~ q |~ r"), ParseError);
    CHECK_THROWS_AS(P("p |~ (q |~ r)"), ParseError);
}

TEST_CASE("parse errors carry positions") {
    try {
        P("a & (b | ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() >= 1);
    }
    CHECK_THROWS_AS(P(""), ParseError);
    CHECK_THROWS_AS(P("a b"), ParseError);
}

TEST_CASE("parse_kb") {
    auto kb = parse_kb("adult |~ worker\nretired |~ adult\nretired |~ ~worker");
    REQUIRE(kb.assertions.size() == 3);
    for (Formula f : kb.assertions) CHECK(f.is_cond());
    CHECK(kb.lines == std::vector<int>{1, 2, 3});

    CHECK(parse_kb("").assertions.empty());
    auto commented = parse_kb("# comment\n\n  a |~ b  # trailing\n");
    REQUIRE(commented.assertions.size() == 1);
    CHECK(commented.lines[0] == 3);

    try {
        parse_kb("a |~\n");
        FAIL("expected a KB error");
    } catch (const KbError& e) {
        REQUIRE(e.errors().size() == 1);
        CHECK(e.errors()[0].line() == 1);
    }
    try {
        parse_kb("a |~\nb\n&c\n");
        FAIL("expected a KB error");
    } catch (const KbError& e) {
        REQUIRE(e.errors().size() == 2);
        CHECK(e.errors()[0].line() == 1);
        CHECK(e.errors()[1].line() == 3);
    }
}

TEST_CASE("complexity cp") {
    CHECK(A("p").cp() == 1);
    CHECK(Formula::cond(A("p"), A("q")).cp() == 5);
    CHECK(Formula::box_neg(A("p")).cp() == 3);
    CHECK(Formula::neg(Formula::cond(A("a"), A("b"))).cp() == 6);
    CHECK(Formula::lmod(A("p")).cp() == 2);
    CHECK(P("a & ~b").cp() == 4);
}

TEST_CASE("cp decreases to immediate subformulas") {
    gen::Rng rng(11);
    auto atoms = gen::atom_names(3);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen::random_prop(rng, atoms, 4);
        switch (f.kind()) {
        case Kind::Neg: CHECK(f.sub().cp() < f.cp()); break;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            CHECK(f.lhs().cp() < f.cp());
            CHECK(f.rhs().cp() < f.cp());
            break;
        default: break;
        }
    }
}

TEST_CASE("printing reads back") {
    gen::Rng rng(5);
    auto atoms = gen::atom_names(4);
    for (int i = 0; i < 500; ++i) {
        Formula a = gen::random_prop(rng, atoms, 3), b = gen::random_prop(rng, atoms, 3);
        for (Formula f : {a, Formula::cond(a, b), Formula::neg(Formula::cond(a, b)), Formula::box_neg(a),
                          Formula::neg(Formula::box_neg(Formula::lmod(a))), Formula::conj(Formula::cond(a, b), b)}) {
            CHECK(parse_formula(to_string(f)) == f);
        }
    }
}

TEST_CASE("hash-consing gives structural identity") {
    CHECK(P("a & b") == P("(a & b)"));
    CHECK(P("a & b") != P("b & a"));
    FormulaSet s{P("a"), P("a"), P("~a")};
    CHECK(s.size() == 2);
}

TEST_CASE("validate_language") {
    Formula p = A("p");
    CHECK_FALSE(has_violation(Formula::box_neg(Formula::lmod(p)), Logic::CL));
    CHECK(has_violation(Formula::neg(Formula::box_neg(Formula::lmod(p))), Logic::C));
    CHECK(has_violation(Formula::lmod(p), Logic::P));
    CHECK(has_violation(Formula::lmod(p), Logic::R));
    CHECK_FALSE(has_violation(Formula::neg(Formula::box_neg(p)), Logic::P));

    // the base layer forbids the calculus modalities everywhere
    CHECK_FALSE(validate_language(Formula::box_neg(p), Logic::P, Layer::Base).empty());
    CHECK_FALSE(validate_language(Formula::lmod(p), Logic::CL, Layer::Base).empty());
    CHECK(validate_language(P("(a |~ b) & ~(c |~ d)"), Logic::C, Layer::Base).empty());
    CHECK(validate_language(P("a -> b"), Logic::R, Layer::Base).empty());
}

TEST_CASE("closure_set") {
    FormulaSet p_cl = closure_set({P("a |~ b")}, Logic::P);
    for (const char* f : {"~a", "b", "~[]~a", "[]~a"}) CHECK(p_cl.count(P(f)) == 1);

    CHECK(closure_set({}, Logic::P).empty());
    CHECK(closure_set({}, Logic::C).empty());

    FormulaSet cl = closure_set({P("~(a |~ b)")}, Logic::CL);
    for (const char* f : {"[L]a", "[]~[L]a", "~[L]b"}) CHECK(cl.count(P(f)) == 1);

    // C has no negated box formulas
    for (Formula f : closure_set({P("a |~ b"), P("~(b |~ c)")}, Logic::C)) CHECK_FALSE(f.is_negated(Kind::BoxNeg));
}

TEST_CASE("closure_set is monotone and idempotent") {
    gen::Rng rng(3);
    for (Logic l : {Logic::C, Logic::CL, Logic::P, Logic::R}) {
        for (int i = 0; i < 40; ++i) {
            FormulaSet small = gen::random_kb(rng, 2, 3, 1);
            FormulaSet big = small;
            for (Formula f : gen::random_kb(rng, 2, 2, 0)) big.insert(f);
            FormulaSet cs = closure_set(small, l), cb = closure_set(big, l);
            for (Formula f : cs) CHECK(cb.count(f) == 1);
            for (Formula f : small) CHECK(cs.count(f) == 1);
            // closing the base-language part again adds nothing
            FormulaSet base;
            for (Formula f : cs)
                if (validate_language(f, l, Layer::Base).empty()) base.insert(f);
            FormulaSet again = closure_set(base, l);
            for (Formula f : again) CHECK(cs.count(f) == 1);
        }
    }
}

TEST_CASE("logic names") {
    CHECK(parse_logic("cl") == Logic::CL);
    CHECK(parse_logic("R") == Logic::R);
    CHECK(parse_logic("rm") == std::nullopt);
    CHECK(logic_name(Logic::C) == "C");
}
