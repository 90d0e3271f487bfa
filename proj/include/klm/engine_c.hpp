#pragma once

#include <vector>

#include "klm/tableau.hpp"

namespace klm {

// C has no used-conditional bookkeeping: a node is just Γ.
using CNode = FormulaSet;

// Every rule instance applicable to n: boolean rules per principal, (|~+)
// with its three conclusions per conditional, (|~-) per negated conditional,
// (L-) per negated [L] formula (or the serial form). Instances with a
// conclusion equal to n are left out; they can never help refute n.
std::vector<RuleApplication> applicable_rule_instances_c(const CNode& n);

struct CSearchReport {
    long long nodes = 0;
    long long instances = 0;
    bool within_closure = true;  // every node is a subset of the root's closure
    bool fixpoint = true;        // the refutability table is stable under one more round
};

Verdict decide_c(const FormulaSet& gamma, const EngineOptions& opt = {}, CSearchReport* report = nullptr);

}  // namespace klm
