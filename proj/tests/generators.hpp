#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "klm/formula.hpp"

namespace klm::gen {

using Rng = std::mt19937_64;

std::vector<std::string> atom_names(int n);

// Random propositional formula over `atoms` with at most `depth` connectives
// on any path.
Formula random_prop(Rng& rng, const std::vector<std::string>& atoms, int depth);

// Rewrites f into a different but classically equivalent formula.
Formula equivalent_variant(Rng& rng, Formula f);

// Truth-table equivalence / entailment of propositional formulas.
bool prop_equivalent(Formula a, Formula b);
bool prop_entails(Formula a, Formula b);

// A knowledge-base shaped input: positive conditionals, `negated`
// negated conditionals and up to one propositional fact.
FormulaSet random_kb(Rng& rng, int atoms, int max_conds, int negated, int depth = 1);

// Negated instance of a KLM axiom schema with random propositional
// arguments over at most three atoms.
struct Schema {
    std::string name;
    std::function<FormulaSet(Rng&)> negated_instance;
};
std::vector<Schema> schemas();

// Every KB of at most two conditionals over literals of a, b together with
// one negated conditional over the same literals.
std::vector<FormulaSet> tiny_corpus();

}  // namespace klm::gen
