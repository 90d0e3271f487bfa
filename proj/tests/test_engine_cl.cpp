#include "doctest.h"

#include "generators.hpp"
#include "klm/engine_cl.hpp"
#include "klm/engine_p.hpp"
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

bool sat(const FormulaSet& g) { return decide_cl(g).sat(); }

}  // namespace

TEST_CASE("apply_L_minus") {
    auto one = apply_L_minus({S({"[L]a", "~[L]b"}), {}});
    REQUIRE(one.size() == 1);
    CHECK(one[0].gamma == S({"a", "~b"}));

    auto serial = apply_L_minus({S({"[L]a", "[L]b", "c |~ d"}), {}});
    REQUIRE(serial.size() == 1);
    CHECK(serial[0].gamma == S({"a", "b"}));

    auto two = apply_L_minus({S({"~[L]a", "~[L]b"}), {}});
    REQUIRE(two.size() == 2);
    std::set<FormulaSet> got{two[0].gamma, two[1].gamma};
    CHECK(got == std::set<FormulaSet>{S({"~a"}), S({"~b"})});
    for (const auto& c : two) CHECK(c.sigma.empty());

    CHECK_THROWS_AS(apply_L_minus({S({"a"}), {}}), std::invalid_argument);
}

TEST_CASE("CL (|~-) wraps in L") {
    TableauNode c = apply_neg_cond_p({S({"~(a |~ b)", "c |~ d"}), {}}, P("~(a |~ b)"), Logic::CL);
    CHECK(c.gamma == S({"[L]a", "[]~[L]a", "~[L]b", "c |~ d"}));
    CHECK(measure_p({S({"a |~ b", "[]~[L]a"}), {}}, Logic::CL).c2 == 0);
}

TEST_CASE("decide_cl examples") {
    CHECK_FALSE(sat(S({"a0 |~ a1", "a1 |~ a2", "a2 |~ a0", "~(a0 |~ a2)"})));
    CHECK_FALSE(sat(S({"~(c |~ b)", "c |~ a", "a |~ b", "b |~ c"})));
    CHECK(sat(S({"a |~ c", "b |~ c", "~(a | b |~ c)"})));
    CHECK_FALSE(sat(S({"a |~ b", "a & b |~ c", "~(a |~ c)"})));
    CHECK(sat({}));
    CHECK_FALSE(sat(S({"~(p |~ p)"})));
    // the P triangle needs OR; the oracle finds a CL countermodel
    CHECK(sat(S({"a |~ w", "r |~ a", "r |~ ~w", "~(a |~ ~r)"})));
    // rational monotonicity fails
    CHECK(sat(S({"a |~ w", "~(a |~ ~m)", "~(a & m |~ w)"})));
}

TEST_CASE("CL models and traces") {
    gen::Rng rng(1234);
    for (int i = 0; i < 150; ++i) {
        FormulaSet g = gen::random_kb(rng, 3, 3, i % 3);
        EngineOptions opt;
        opt.trace = true;
        Verdict v = decide_cl(g, opt);
        if (v.sat()) {
            REQUIRE(v.model);
            CHECK(std::holds_alternative<StateModel>(v.model->model));
            CHECK(validate_model(v.model->model, Logic::CL, antecedents_of(g)).empty());
            CHECK(satisfies(*v.model, g));
        } else {
            REQUIRE(v.trace);
            CHECK(testing::leaves_are_axioms(*v.trace));
        }
    }
}

TEST_CASE("CL agrees with the oracle and contains P") {
    gen::Rng rng(77);
    for (int i = 0; i < 80; ++i) {
        FormulaSet g = gen::random_kb(rng, 2, 3, 1 + i % 2);
        bool cl = sat(g);
        auto o = oracle_sat(g, Logic::CL, 3);
        if (o.sat) CHECK(cl);
        if (!cl) CHECK_FALSE(o.sat);
        if (decide_p(g).sat()) CHECK(cl);
    }
}
