#pragma once

#include <vector>

#include "klm/tableau.hpp"

namespace klm {

// (L-): one propositional successor per ~[L]A in Γ (Γ^{L↓}, ~A), or the
// single successor Γ^{L↓} when Γ has [L]-formulas but none negated.
// A node is satisfiable only if all successors are.
std::vector<TableauNode> apply_L_minus(const TableauNode& n);

Verdict decide_cl(const FormulaSet& gamma, const EngineOptions& opt = {});

}  // namespace klm
