#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "klm/formula.hpp"
#include "klm/language.hpp"

namespace klm {

using Valuation = std::set<std::string>;

// Worlds are 0..size-1. less[a][b] means a < b (a is preferred to b).
struct PrefModel {
    std::vector<Valuation> val;
    std::vector<std::vector<bool>> less;

    int size() const { return static_cast<int>(val.size()); }
    void resize(int n);
};

// States are 0..states-1 and worlds 0..worlds-1; less is over states.
struct StateModel {
    std::vector<Valuation> val;                // per world
    std::vector<std::vector<int>> label;       // per state, sorted world ids
    std::vector<std::vector<bool>> less;       // over states

    int worlds() const { return static_cast<int>(val.size()); }
    int states() const { return static_cast<int>(label.size()); }
};

using Model = std::variant<PrefModel, StateModel>;

// A model together with the world at which the query is evaluated.
struct PointedModel {
    Model model;
    int point = 0;
};

// ---- evaluation ----
// For preferential models every formula is evaluated at a world; L is not
// meaningful there and throws. For state models propositional formulas are
// evaluated at a world and conditionals globally over states.
bool eval_at(const PrefModel& m, int w, Formula f);
bool eval_at_world(const StateModel& m, int w, Formula f);
bool eval_at_state(const StateModel& m, int s, Formula f);
bool eval_formula_at(const Model& m, int point, Formula f);
bool satisfies(const PointedModel& pm, const FormulaSet& gamma);

std::vector<int> min_worlds(const PrefModel& m, Formula a);
std::vector<int> min_states(const StateModel& m, Formula a);

// ---- structural checks ----
std::vector<std::string> validate_model(const PrefModel& m, Logic logic);
std::vector<std::string> validate_model(const StateModel& m, Logic logic, const FormulaSet& antecedents);
std::vector<std::string> validate_model(const Model& m, Logic logic, const FormulaSet& antecedents);

// ---- enumeration ----
struct EnumOptions {
    bool full_partial_orders = false;  // P only: every strict partial order instead of multi-linear ones
};

// Calls `visit` on every model up to `bound` points; stops early when
// `visit` returns false. Returns false iff stopped early.
bool enumerate_models(const std::vector<std::string>& atoms, int bound, Logic logic,
                      const std::function<bool(const Model&)>& visit, EnumOptions opts = {});

// ---- oracle ----
struct OracleResult {
    bool sat = false;
    std::optional<PointedModel> model;
    long long models_checked = 0;
    // true when "no model" is a proof of unsatisfiability (R with bound >= size)
    bool definitive = false;
};

OracleResult oracle_sat(const FormulaSet& gamma, Logic logic, int bound);
// P over every strict partial order instead of multi-linear ones
OracleResult oracle_sat_full_orders(const FormulaSet& gamma, int bound);

// all relations on n points, as less[a][b] matrices
std::vector<std::vector<std::vector<bool>>> multi_linear_orders(int n);
std::vector<std::vector<std::vector<bool>>> strict_partial_orders(int n);
std::vector<std::vector<std::vector<bool>>> irreflexive_relations(int n);

// ---- serialization ----
nlohmann::json model_to_json(const PointedModel& pm);
std::string model_to_text(const PointedModel& pm);

// Converts a preferential model into the equivalent state model with
// singleton labels.
StateModel as_state_model(const PrefModel& m);

}  // namespace klm
