#pragma once

#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "klm/tableau.hpp"

namespace klm {

using Label = int;

struct LabelledNode {
    std::set<std::pair<Label, Formula>> world;       // x:F, positive conditionals excepted
    std::set<std::pair<Label, Label>> rel;           // x<y
    std::map<Formula, std::set<Label>> used;         // positive conditional -> labels it was expanded at
    std::set<std::pair<Label, Formula>> considered;  // x:~[]~A already handled
    std::set<Label> labels;
    Label next = 1;
    std::shared_ptr<const FormulaSet> input;         // the initial set, for the measure

    bool has(Label x, Formula f) const { return world.count({x, f}) > 0; }
};

// x0:F for every input formula
LabelledNode initial_node(const FormulaSet& gamma);

// Adds x:f; a positive conditional goes to the used-label table instead.
void add_formula(LabelledNode& n, Label x, Formula f);
// Adds lower<upper and copies upper's boxes to lower.
void add_relation(LabelledNode& n, Label lower, Label upper);

bool is_axiom(const LabelledNode& n);

struct RMeasure {
    int c1 = 0;
    std::vector<std::pair<int, int>> c2;  // (n_x, k_x) per label, sorted
    int c3 = 0;
    int c4 = 0;
    int c5 = 0;
};
// Lexicographic, with the multiset ordering on c2.
bool operator<(const RMeasure& a, const RMeasure& b);
bool operator==(const RMeasure& a, const RMeasure& b);

RMeasure measure_r(const LabelledNode& n);

// (□-) on x:~[]~A with a fresh label y below x.
LabelledNode apply_box_minus_r(const LabelledNode& n, Label x, Formula principal);

// (<) on x<y and z: {z<y + y's boxes at z, x<z + z's boxes at x}.
std::pair<LabelledNode, LabelledNode> apply_modularity(const LabelledNode& n, Label x, Label y, Label z);

Verdict decide_r(const FormulaSet& gamma, const EngineOptions& opt = {});

std::string label_name(Label x);

}  // namespace klm
