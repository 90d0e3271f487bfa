#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klm/formula.hpp"

namespace klm {

enum class Logic { C, CL, P, R };
enum class Layer { Base, Calculus };

std::string_view logic_name(Logic l);
std::optional<Logic> parse_logic(std::string_view s);

// Empty result means the formula is well formed for the logic and layer.
std::vector<std::string> validate_language(Formula f, Logic logic, Layer layer);

// Every formula that can occur in a tableau node started from `input`.
FormulaSet closure_set(const FormulaSet& input, Logic logic);

// antecedents of all conditionals occurring in the formulas
FormulaSet antecedents_of(const FormulaSet& s);

}  // namespace klm
