#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "klm/language.hpp"
#include "klm/models.hpp"
#include "klm/parser.hpp"
#include "klm/tableau.hpp"

namespace klm {

// Runs the tableau engine for `logic`.
Verdict decide(const FormulaSet& gamma, Logic logic, const EngineOptions& opt = {});

enum class Mode { Sat, Valid, Entails };
enum class EngineChoice { Default, Naive, Oracle, Both };
enum class OutputFormat { Text, Json };

struct QueryRequest {
    Mode mode = Mode::Sat;
    Logic logic = Logic::P;
    KnowledgeBase kb;
    std::optional<Formula> query;
    EngineChoice engine = EngineChoice::Default;
    std::optional<int> bound;  // oracle bound; default 4, or the input size for R
    OutputFormat output = OutputFormat::Text;
    bool trace = false;
    bool timing = false;  // report wall-clock millis; off keeps output byte-stable
};

namespace exit_code {
inline constexpr int yes = 0;           // SAT, valid, entailed
inline constexpr int no = 1;
inline constexpr int error = 2;
inline constexpr int inconclusive = 3;  // oracle found no model within the bound
}  // namespace exit_code

struct QueryReport {
    int exit_code = exit_code::error;
    std::string out;
    std::string err;
};

// The set whose satisfiability answers the request:
// sat -> KB (plus the formula, if any); valid -> {~F}; entails -> KB + {~query}.
FormulaSet query_set(const QueryRequest& req);

QueryReport run(const QueryRequest& req);

std::string format_model(const PointedModel& pm, OutputFormat fmt);

// Full command line: flag parsing, file reading, run, printing.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klm
