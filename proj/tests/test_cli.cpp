#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "klm/query.hpp"

using namespace klm;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string triangle = std::string(KLM_CORPUS_DIR) + "/triangle.kb";
const std::string rm = "(a |~ w) & ~(a |~ ~m) & ~((a & m) |~ w)";

}  // namespace

TEST_CASE("documented command lines") {
    CHECK(cli({"--logic", "p", "--mode", "entails", "--kb", triangle, "--query", "adult |~ ~retired"}).code == 0);
    CHECK(cli({"--logic", "r", "--mode", "sat", "--formula", rm}).code == 1);
    CHECK(cli({"--logic", "p", "--mode", "sat", "--formula", rm}).code == 0);
}

TEST_CASE("modes") {
    auto valid = cli({"--logic", "c", "--mode", "valid", "--formula", "a |~ a"});
    CHECK(valid.code == 0);
    CHECK(valid.out.find("answer: valid") != std::string::npos);
    CHECK(cli({"--logic", "c", "--mode", "valid", "--formula", "a |~ b"}).code == 1);
    auto no = cli({"--logic", "p", "--mode", "entails", "--kb", triangle, "--query", "adult |~ retired"});
    CHECK(no.code == 1);
    CHECK(no.out.find("answer: not entailed") != std::string::npos);
    CHECK(no.out.find("model:") != std::string::npos);
}

TEST_CASE("engines") {
    auto both = cli({"--logic", "p", "--formula", rm, "--engine", "both"});
    CHECK(both.code == 0);
    CHECK(both.out.find("agreement: agree") != std::string::npos);

    auto rboth = cli({"--logic", "r", "--formula", rm, "--engine", "both"});
    CHECK(rboth.code == 1);
    CHECK(rboth.out.find("agreement: agree") != std::string::npos);

    CHECK(cli({"--logic", "p", "--formula", rm, "--engine", "naive"}).code == 0);
    CHECK(cli({"--logic", "r", "--formula", rm, "--engine", "naive"}).code == 1);
    CHECK(cli({"--logic", "r", "--formula", rm, "--engine", "oracle"}).code == 1);
    CHECK(cli({"--logic", "cl", "--formula", rm, "--engine", "oracle"}).code == 0);

    // no P model within the bound is not a proof
    auto inconclusive = cli({"--logic", "p", "--formula", "~(a |~ a)", "--engine", "oracle", "--bound", "2"});
    CHECK(inconclusive.code == 3);
    CHECK(inconclusive.out.find("NO_MODEL_WITHIN_BOUND") != std::string::npos);
}

TEST_CASE("json output") {
    auto r = cli({"--logic", "p", "--formula", rm, "--format", "json", "--engine", "both"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "SAT");
    CHECK(j.contains("model"));
    CHECK(j["stats"].contains("nodes"));
    CHECK(j["stats"].contains("labels"));
    CHECK(j["stats"]["millis"] == 0);
    CHECK(j["oracle"]["status"] == "SAT");

    auto t = cli({"--logic", "r", "--formula", rm, "--output", "json", "--trace"});
    REQUIRE(t.code == 1);
    auto jt = nlohmann::json::parse(t.out);
    CHECK(jt["status"] == "UNSAT");
    CHECK(jt["trace"].size() > 1);
}

TEST_CASE("output is byte-stable") {
    std::vector<std::string> args{"--logic", "cl", "--kb", triangle, "--mode", "entails", "--query", "retired |~ worker",
                                  "--trace", "--engine", "both"};
    auto a = cli(args), b = cli(args);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
}

TEST_CASE("errors") {
    auto parse = cli({"--logic", "p", "--formula", "a & (b"});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("--formula:1:") != std::string::npos);

    auto nested = cli({"--logic", "p", "--formula", "(p |~ q) |~ r"});
    CHECK(nested.code == 2);

    CHECK(cli({"--logic", "p", "--kb", "/nonexistent/file.kb"}).code == 2);
    CHECK(cli({"--logic", "q", "--formula", "a"}).code == 2);
    CHECK(cli({"--formula", "a"}).code == 2);
    CHECK(cli({"--logic", "p", "--mode", "entails", "--kb", triangle}).code == 2);
    CHECK(cli({"--logic", "cl", "--formula", "a", "--engine", "naive"}).code == 2);
    CHECK(cli({"--logic", "p", "--formula", "a", "--engine", "oracle", "--bound", "0"}).code == 2);
    CHECK(cli({"--logic", "p", "--formula", "[]~a"}).code == 2);
    CHECK(cli({"--logic", "p", "--mode", "valid", "--kb", triangle, "--formula", "a |~ a"}).code == 2);
}

TEST_CASE("query_set") {
    QueryRequest req;
    req.mode = Mode::Entails;
    req.kb = parse_kb("a |~ b\n");
    req.query = parse_formula("a |~ c");
    CHECK(to_string(query_set(req)) == to_string(FormulaSet{parse_formula("a |~ b"), parse_formula("~(a |~ c)")}));
    req.mode = Mode::Valid;
    req.kb = {};
    CHECK(query_set(req) == FormulaSet{parse_formula("~(a |~ c)")});
}
