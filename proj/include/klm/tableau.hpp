#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "klm/formula.hpp"
#include "klm/language.hpp"
#include "klm/models.hpp"

namespace klm {

// Γ;Σ. Σ holds the positive conditionals already expanded in this world.
struct TableauNode {
    FormulaSet gamma;
    FormulaSet sigma;

    friend bool operator==(const TableauNode&, const TableauNode&) = default;
    friend auto operator<=>(const TableauNode& a, const TableauNode& b) {
        if (auto c = a.gamma <=> b.gamma; c != 0) return c;
        return a.sigma <=> b.sigma;
    }
};

enum class Projection { Box, BoxDown, CondPos, CondNeg, CondPM, LDown };

FormulaSet project(const FormulaSet& gamma, Projection p);
inline FormulaSet project(const TableauNode& n, Projection p) { return project(n.gamma, p); }

bool is_axiom(const FormulaSet& gamma);
inline bool is_axiom(const TableauNode& n) { return is_axiom(n.gamma); }

// Boolean decomposition of a single formula: the formulas added on each
// branch. Empty for formulas no boolean rule applies to.
struct BoolRule {
    const char* name = nullptr;
    std::vector<std::vector<Formula>> branches;
    bool branching() const { return branches.size() > 1; }
};
std::optional<BoolRule> boolean_rule(Formula f);

// Conclusions of (|~+) on an unlabelled world: ~A, ~[]~A, B (under L in CL).
std::vector<Formula> cond_plus_branches(Formula c, Logic logic);

struct RuleApplication {
    std::string rule;
    Formula principal;
    std::vector<TableauNode> conclusions;
};

// The static rule the saturation would apply next, if any: non-branching
// boolean rules first, then branching ones, then (|~+) for P/R and CL.
// Formulas are taken in set order.
std::optional<RuleApplication> next_static_rule(const TableauNode& n, Logic logic);

bool is_saturated(const TableauNode& n, Logic logic);

struct RuleStep {
    std::string rule;
    Formula principal;
};

struct Saturation {
    TableauNode node;
    std::vector<RuleStep> steps;
};

// Every open saturated branch, leftmost first.
std::vector<Saturation> expand_static(const TableauNode& n, Logic logic);

// ---- traces, stats, verdicts ----

struct TraceNode {
    std::string rule;  // rule applied at this node, "ax" if closed by an axiom, "open" for a leaf left open
    std::string principal;
    std::vector<std::string> formulas;
    std::vector<std::string> used;       // Σ, or used-label lists in R
    std::vector<std::string> relations;  // R only
    std::vector<int> children;
};

class Trace {
public:
    int add(TraceNode n);
    TraceNode& at(int i) { return nodes_[i]; }
    const TraceNode& at(int i) const { return nodes_[i]; }
    int root = -1;
    // nodes reachable from the root, renumbered depth-first
    nlohmann::json to_json() const;
    std::string to_text() const;
    // number of nodes reachable from the root
    int reachable() const;
    // true if some reachable node applied `rule`
    bool uses_rule(const std::string& rule) const;

private:
    std::vector<TraceNode> nodes_;
};

struct Stats {
    long long nodes = 0;
    int labels = 0;
    long long rule_apps = 0;
    long long measure_checks = 0;
    long long measure_violations = 0;
    long long millis = 0;
};

enum class Status { Sat, Unsat };

struct Verdict {
    Status status = Status::Sat;
    std::optional<PointedModel> model;
    std::optional<Trace> trace;
    Stats stats;
    std::vector<std::string> audit_log;  // measure violations, one line each
    bool sat() const { return status == Status::Sat; }
};

struct EngineOptions {
    bool naive = false;   // P: plain calculus; R: always (□-) instead of reusing a minimal world
    bool trace = false;   // build the closed tableau on UNSAT
    bool model = true;    // extract a model on SAT
    bool audit = false;   // check measure decrease on every rule application
    std::optional<std::uint64_t> shuffle_seed;  // R: random static rule order
};

class LanguageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws LanguageError unless every formula is in the base language.
void check_input(const FormulaSet& gamma, Logic logic);

// Trace node for a tableau node.
TraceNode trace_node(const TableauNode& n, std::string rule = {}, Formula principal = {});

}  // namespace klm
