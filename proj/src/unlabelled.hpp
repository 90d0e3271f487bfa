#pragma once

// Search shared by the P and CL engines.

#include <vector>

#include "klm/tableau.hpp"

namespace klm::detail {

struct ChainWorld {
    FormulaSet gamma;
    std::vector<FormulaSet> bad;  // CL: propositional (L-) successors
    bool has_l = false;           // CL: some [L] formula in gamma
};

// A chain of saturated worlds, each below the previous one.
using Chain = std::vector<ChainWorld>;

struct Witness {
    Chain root;
    std::vector<Chain> side;  // one per negated conditional of the root branch
};

// Optimized procedure for P and CL: split over negated conditionals, then
// CHECK with the strengthened box rule.
Verdict general_check(const FormulaSet& gamma, Logic logic, const EngineOptions& opt, Witness* witness);

PointedModel chains_to_pref_model(const Witness& w);
// CL: good worlds from the chains, bad worlds from their (L-) successors.
PointedModel chains_to_state_model(const Witness& w);

// Throws std::logic_error unless the verdict's model is a model of gamma.
void check_model(const Verdict& v, const FormulaSet& gamma, Logic logic);

}  // namespace klm::detail
