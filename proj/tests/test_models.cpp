#include "doctest.h"

#include "generators.hpp"
#include "klm/models.hpp"
#include "klm/parser.hpp"

using namespace klm;

namespace {

Formula P(const char* s) { return parse_formula(s); }

PrefModel pref(std::vector<Valuation> val, std::vector<std::pair<int, int>> less) {
    PrefModel m;
    m.resize(static_cast<int>(val.size()));
    m.val = std::move(val);
    for (auto [a, b] : less) m.less[a][b] = true;
    return m;
}

long long count_models(const std::vector<std::string>& atoms, int bound, Logic l) {
    long long n = 0;
    enumerate_models(atoms, bound, l, [&](const Model&) {
        ++n;
        return true;
    });
    return n;
}

}  // namespace

TEST_CASE("conditionals in a one-world model") {
    PrefModel m = pref({{"a"}}, {});
    CHECK_FALSE(eval_at(m, 0, P("a |~ b")));
    CHECK(eval_at(m, 0, P("b |~ c")));
    CHECK(eval_at(m, 0, P("a |~ a")));
}

TEST_CASE("two-world ranked model") {
    // w1 < w0
    PrefModel m = pref({{"a", "m"}, {"a", "w"}}, {{1, 0}});
    CHECK(validate_model(m, Logic::R).empty());
    CHECK(eval_at(m, 0, P("a |~ w")));
    CHECK(eval_at(m, 0, P("a |~ ~m")));
    CHECK_FALSE(eval_at(m, 0, P("a & m |~ w")));
    // conditionals do not depend on the world
    for (const char* f : {"a |~ w", "a |~ ~m", "a & m |~ w", "m |~ ~w"})
        CHECK(eval_at(m, 0, P(f)) == eval_at(m, 1, P(f)));
}

TEST_CASE("box semantics") {
    PrefModel m = pref({{"a"}, {"b"}, {"a", "b"}}, {{1, 0}, {2, 0}});
    CHECK_FALSE(eval_at(m, 0, Formula::box_neg(P("a"))));
    CHECK(eval_at(m, 1, Formula::box_neg(P("a"))));  // nothing below w1
    CHECK(eval_at(m, 0, Formula::box_neg(P("~a & ~b"))));
    CHECK_THROWS(eval_at(m, 0, Formula::lmod(P("a"))));
}

TEST_CASE("min_worlds") {
    CHECK(min_worlds(PrefModel{}, P("a")).empty());
    CHECK(min_worlds(pref({{"a"}, {"a"}}, {}), P("a")) == std::vector<int>{0, 1});
    CHECK(min_worlds(pref({{"a"}, {"a"}}, {{1, 0}}), P("a")) == std::vector<int>{1});
    CHECK(min_worlds(pref({{"a"}, {}}, {{1, 0}}), P("a")) == std::vector<int>{0});
}

TEST_CASE("validate_model") {
    PrefModel ranked = pref({{}, {"p"}, {"q"}}, {{0, 1}, {0, 2}});
    CHECK(validate_model(ranked, Logic::R).empty());
    CHECK(validate_model(ranked, Logic::P).empty());

    // a chain plus an isolated world is preferential but not modular
    PrefModel unranked = pref({{}, {}, {}}, {{0, 1}});
    CHECK(validate_model(unranked, Logic::P).empty());
    CHECK_FALSE(validate_model(unranked, Logic::R).empty());

    PrefModel cycle = pref({{}, {}}, {{0, 1}, {1, 0}});
    auto v = validate_model(cycle, Logic::P);
    REQUIRE_FALSE(v.empty());
    bool mentions = false;
    for (const auto& s : v) mentions = mentions || s.find("transitive") != std::string::npos;
    CHECK(mentions);

    CHECK_FALSE(validate_model(pref({{}}, {{0, 0}}), Logic::P).empty());

    StateModel sc = as_state_model(cycle);
    CHECK(validate_model(sc, Logic::C, {}).empty());
    CHECK_FALSE(validate_model(sc, Logic::CL, {}).empty());
}

TEST_CASE("C smoothness per antecedent") {
    // two a-states below each other: no minimal a-state
    StateModel m;
    m.val = {{"a"}, {"a", "b"}};
    m.label = {{0}, {1}};
    m.less = {{false, true}, {true, false}};
    CHECK(validate_model(m, Logic::C, {}).empty());
    CHECK(validate_model(m, Logic::C, {P("c")}).empty());
    CHECK_FALSE(validate_model(m, Logic::C, {P("a")}).empty());
    CHECK(min_states(m, P("a")).empty());

    StateModel empty_label = m;
    empty_label.label[1].clear();
    CHECK_FALSE(validate_model(empty_label, Logic::C, {}).empty());
}

TEST_CASE("enumeration counts") {
    CHECK(count_models({"p"}, 1, Logic::R) == 2);
    CHECK(count_models({}, 1, Logic::P) == 1);
    // one world: 2 valuations; two worlds: 4 valuation pairs x 3 ranked orders
    CHECK(count_models({"p"}, 2, Logic::R) == 14);
    CHECK(count_models({}, 2, Logic::P) == 4);
    CHECK_THROWS(count_models({"p"}, 0, Logic::R));

    // labelled forests of chains: 1, 3, 13, 73
    CHECK(multi_linear_orders(1).size() == 1);
    CHECK(multi_linear_orders(2).size() == 3);
    CHECK(multi_linear_orders(3).size() == 13);
    CHECK(multi_linear_orders(4).size() == 73);
    // labelled posets: 1, 3, 19, 219
    CHECK(strict_partial_orders(3).size() == 19);
    CHECK(strict_partial_orders(4).size() == 219);
    CHECK(irreflexive_relations(3).size() == 64);
}

TEST_CASE("enumerated models pass validation") {
    for (Logic l : {Logic::R, Logic::P, Logic::CL}) {
        enumerate_models({"p"}, 3, l, [&](const Model& m) {
            CHECK(validate_model(m, l, {}).empty());
            return true;
        });
    }
}

TEST_CASE("minimality is A and box not A") {
    std::vector<Formula> fs{P("p"), P("~p | q"), P("p & ~q"), P("q -> p")};
    for (Logic l : {Logic::P, Logic::R}) {
        enumerate_models({"p", "q"}, 3, l, [&](const Model& mm) {
            const auto& m = std::get<PrefModel>(mm);
            for (Formula a : fs) {
                auto mins = min_worlds(m, a);
                for (int w = 0; w < m.size(); ++w) {
                    bool is_min = std::find(mins.begin(), mins.end(), w) != mins.end();
                    CHECK(is_min == (eval_at(m, w, a) && eval_at(m, w, Formula::box_neg(a))));
                }
            }
            return true;
        });
    }
}

TEST_CASE("oracle examples") {
    FormulaSet rm{P("a |~ w"), P("~(a |~ ~m)"), P("~(a & m |~ w)")};
    auto p = oracle_sat(rm, Logic::P, 4);
    CHECK(p.sat);
    REQUIRE(p.model);
    CHECK(satisfies(*p.model, rm));
    CHECK(validate_model(p.model->model, Logic::P, antecedents_of(rm)).empty());

    auto r = oracle_sat(rm, Logic::R, total_size(rm));
    CHECK_FALSE(r.sat);
    CHECK(r.definitive);

    FormulaSet c{P("~(c |~ b)"), P("c |~ a"), P("a |~ b"), P("b |~ c")};
    auto oc = oracle_sat(c, Logic::C, 4);
    CHECK(oc.sat);
    REQUIRE(oc.model);
    CHECK(satisfies(*oc.model, c));

    // no model within a small bound is not a proof for P
    auto small = oracle_sat(rm, Logic::P, 1);
    CHECK_FALSE(small.sat);
    CHECK_FALSE(small.definitive);
}

TEST_CASE("oracle SAT is monotone across logics") {
    auto corpus = gen::tiny_corpus();
    for (std::size_t i = 0; i < corpus.size(); i += 23) {
        const auto& g = corpus[i];
        bool r = oracle_sat(g, Logic::R, 3).sat, p = oracle_sat(g, Logic::P, 3).sat,
             cl = oracle_sat(g, Logic::CL, 3).sat, c = oracle_sat(g, Logic::C, 3).sat;
        CHECK((!r || p));
        CHECK((!p || cl));
        CHECK((!cl || c));
    }
}

TEST_CASE("full partial orders agree with multi-linear ones") {
    auto corpus = gen::tiny_corpus();
    for (std::size_t i = 0; i < corpus.size(); i += 41)
        CHECK(oracle_sat(corpus[i], Logic::P, 3).sat == oracle_sat_full_orders(corpus[i], 3).sat);
}

TEST_CASE("small models suffice for R") {
    // over one atom, anything satisfiable has a model within its size
    gen::Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        FormulaSet g = gen::random_kb(rng, 1, 3, 1);
        int n = total_size(g);
        CHECK(oracle_sat(g, Logic::R, n).sat == oracle_sat(g, Logic::R, n + 2).sat);
    }
}

TEST_CASE("model serialization") {
    PointedModel one{Model{pref({{"a"}}, {})}, 0};
    auto j = model_to_json(one);
    CHECK(j["worlds"].size() == 1);
    CHECK(j["point"] == 0);
    CHECK(j.dump() == model_to_json(one).dump());

    PointedModel ranked{Model{pref({{"a", "m"}, {"a", "w"}}, {{1, 0}})}, 0};
    auto jr = model_to_json(ranked);
    CHECK(jr["worlds"][0]["rank"] == 1);
    CHECK(jr["worlds"][1]["rank"] == 0);
    CHECK(model_to_text(ranked).find("rank") != std::string::npos);

    StateModel s;
    s.val = {{"a"}, {}};
    s.label = {{0, 1}};
    s.less = {{false}};
    auto js = model_to_json(PointedModel{Model{s}, 0});
    CHECK(js["kind"] == "state");
    CHECK(js["states"][0]["label"].size() == 2);
}
