#pragma once

#include <compare>
#include <vector>

#include "klm/tableau.hpp"

namespace klm {

// Lexicographic termination measure shared by P and CL.
struct PMeasure {
    int c1 = 0;  // negated conditionals in Γ
    int c2 = 0;  // conditionals in Γ∪Σ whose antecedent is not yet boxed in Γ
    int c3 = 0;  // conditionals in Γ
    int c4 = 0;  // sum of cp over Γ
    friend auto operator<=>(const PMeasure&, const PMeasure&) = default;
};

// For CL the "boxed antecedent" of A is []~[L]A.
PMeasure measure_p(const TableauNode& n, Logic logic = Logic::P);

// (|~-) after the split: A, []~A, ~B, Σ, Γ^{|~+} ; ∅   (CL: [L]A, []~[L]A, ~[L]B)
TableauNode apply_neg_cond_p(const TableauNode& n, Formula principal, Logic logic = Logic::P);

// Strengthened box rule, one conclusion per ~[]~X in Γ (X = A in P, [L]A in CL).
std::vector<TableauNode> apply_box_minus_strong(const TableauNode& n, Logic logic = Logic::P);

// Plain calculus dynamic rules (P, naive engine).
TableauNode apply_neg_cond_plain(const TableauNode& n, Formula principal);
TableauNode apply_box_minus_plain(const TableauNode& n, Formula principal);

Verdict decide_p(const FormulaSet& gamma, const EngineOptions& opt = {});

}  // namespace klm
