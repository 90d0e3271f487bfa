#include "doctest.h"

#include "generators.hpp"
#include "klm/engine_c.hpp"
#include "klm/engine_cl.hpp"
#include "klm/parser.hpp"
#include "test_util.hpp"

using namespace klm;

namespace {

Formula P(const char* s) { return parse_formula(s); }

FormulaSet S(std::initializer_list<const char*> fs) {
    FormulaSet s;
    for (const char* f : fs) s.insert(P(f));
    return s;
}

bool sat(const FormulaSet& g) { return decide_c(g).sat(); }

}  // namespace

TEST_CASE("applicable_rule_instances_c") {
    auto one = applicable_rule_instances_c(S({"a |~ b"}));
    REQUIRE(one.size() == 1);
    CHECK(one[0].rule == "|~+");
    REQUIRE(one[0].conclusions.size() == 3);
    CHECK(one[0].conclusions[0].gamma == S({"a |~ b", "~[L]a"}));
    CHECK(one[0].conclusions[1].gamma == S({"a |~ b", "[L]a", "[]~[L]a"}));
    CHECK(one[0].conclusions[2].gamma == S({"a |~ b", "[L]a", "[]~[L]a", "[L]b"}));

    auto neg = applicable_rule_instances_c(S({"~(a |~ c)", "a |~ b"}));
    bool found = false;
    for (const auto& app : neg) {
        if (app.rule != "|~-") continue;
        found = true;
        REQUIRE(app.conclusions.size() == 1);
        CHECK(app.conclusions[0].gamma == S({"a |~ b", "[L]a", "[]~[L]a", "~[L]c"}));
    }
    CHECK(found);

    CHECK(applicable_rule_instances_c(S({"p"})).empty());

    // the middle (|~+) conclusion keeps only conditionals and boxes
    auto mid = applicable_rule_instances_c(S({"a |~ b", "[]~[L]c", "p"}));
    for (const auto& app : mid)
        if (app.rule == "|~+") CHECK(app.conclusions[1].gamma == S({"a |~ b", "[L]a", "[]~[L]a", "~[L]c"}));

    auto l = applicable_rule_instances_c(S({"~[L]a", "~[L]b", "[L]c"}));
    int lm = 0;
    for (const auto& app : l) lm += app.rule == "L-";
    CHECK(lm == 2);
}

TEST_CASE("decide_c examples") {
    CHECK_FALSE(sat(S({"~(a |~ c)", "a |~ b", "b |~ a", "b |~ c"})));
    CHECK(sat(S({"~(c |~ b)", "c |~ a", "a |~ b", "b |~ c"})));
    CHECK_FALSE(sat(S({"a |~ b", "a & b |~ c", "~(a |~ c)"})));
    CHECK(sat({}));
    CHECK_FALSE(sat(S({"~(p |~ p)"})));
    // OR is not valid in C
    CHECK(sat(S({"a |~ c", "b |~ c", "~(a | b |~ c)"})));
}

TEST_CASE("the reciprocity example needs the middle (|~+) conclusion") {
    EngineOptions opt;
    opt.trace = true;
    Verdict v = decide_c(S({"~(a |~ c)", "a |~ b", "b |~ a", "b |~ c"}), opt);
    REQUIRE_FALSE(v.sat());
    REQUIRE(v.trace);
    CHECK(v.trace->uses_rule("|~+"));
    CHECK(testing::leaves_are_axioms(*v.trace));
    // some (|~+) step closes a jump node: a child with the box but without the premise's other formulas
    bool jump = false;
    auto j = v.trace->to_json();
    for (const auto& n : j) {
        if (n["rule"] != "|~+" || n["children"].size() != 3) continue;
        const auto& m = j[n["children"][1].get<int>()];
        std::set<std::string> fs(m["formulas"].begin(), m["formulas"].end());
        std::set<std::string> parent(n["formulas"].begin(), n["formulas"].end());
        bool dropped = false;
        for (const auto& f : parent) dropped = dropped || !fs.count(f);
        jump = jump || dropped;
    }
    CHECK(jump);
}

TEST_CASE("C search stays in the closure and reaches a fixpoint") {
    gen::Rng rng(5150);
    for (int i = 0; i < 100; ++i) {
        FormulaSet g = gen::random_kb(rng, 2, 3, i % 3);
        CSearchReport rep;
        EngineOptions opt;
        opt.trace = true;
        Verdict v = decide_c(g, opt, &rep);
        CHECK(rep.within_closure);
        CHECK(rep.fixpoint);
        CHECK(rep.nodes > 0);
        if (!v.sat()) {
            REQUIRE(v.trace);
            CHECK(testing::leaves_are_axioms(*v.trace));
        }
        // C is the weakest logic
        if (!v.sat()) CHECK_FALSE(decide_cl(g).sat());
    }
}

TEST_CASE("C agrees with the oracle") {
    gen::Rng rng(6);
    for (int i = 0; i < 40; ++i) {
        FormulaSet g = gen::random_kb(rng, 2, 3, 1);
        bool c = sat(g);
        auto o = oracle_sat(g, Logic::C, 3);
        if (o.sat) CHECK(c);
        if (!c) CHECK_FALSE(o.sat);
    }
}
