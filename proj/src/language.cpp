#include "klm/language.hpp"

namespace klm {

std::string_view logic_name(Logic l) {
    switch (l) {
    case Logic::C: return "C";
    case Logic::CL: return "CL";
    case Logic::P: return "P";
    case Logic::R: return "R";
    }
    return "?";
}

std::optional<Logic> parse_logic(std::string_view s) {
    if (s == "c" || s == "C") return Logic::C;
    if (s == "cl" || s == "CL") return Logic::CL;
    if (s == "p" || s == "P") return Logic::P;
    if (s == "r" || s == "R") return Logic::R;
    return std::nullopt;
}

namespace {

struct Checker {
    Logic logic;
    Layer layer;
    std::vector<std::string> out;

    void add(Formula f, const std::string& why) { out.push_back(why + ": " + to_string(f)); }

    // positive: polarity of the occurrence (flipped by ~ and the left of ->)
    void walk(Formula f, bool positive) {
        switch (f.kind()) {
        case Kind::Atom:
            return;
        case Kind::Neg:
            walk(f.sub(), !positive);
            return;
        case Kind::And:
        case Kind::Or:
            walk(f.lhs(), positive);
            walk(f.rhs(), positive);
            return;
        case Kind::Implies:
            walk(f.lhs(), !positive);
            walk(f.rhs(), positive);
            return;
        case Kind::Cond:
            if (!f.lhs().is_propositional() || !f.rhs().is_propositional())
                add(f, f.lhs().has_cond() || f.rhs().has_cond() ? "conditional inside conditional"
                                                               : "modal operator inside conditional");
            return;
        case Kind::BoxNeg:
            box(f, positive);
            return;
        case Kind::LMod:
            lmod(f);
            return;
        }
    }

    void box(Formula f, bool positive) {
        if (layer == Layer::Base) {
            add(f, "box not allowed in the base language");
            return;
        }
        Formula body = f.sub();
        if (logic == Logic::P || logic == Logic::R) {
            if (!body.is_propositional()) add(f, "box body must be propositional");
            return;
        }
        if (!body.is_l() || !body.sub().is_propositional()) add(f, "box body must be L of a propositional formula");
        if (logic == Logic::C && !positive) add(f, "negated box not allowed in C");
    }

    void lmod(Formula f) {
        if (layer == Layer::Base) {
            add(f, "L not allowed in the base language");
            return;
        }
        if (logic == Logic::P || logic == Logic::R) {
            add(f, "L not allowed in this logic");
            return;
        }
        if (!f.sub().is_propositional()) add(f, "L body must be propositional");
    }
};

}  // namespace

std::vector<std::string> validate_language(Formula f, Logic logic, Layer layer) {
    Checker c{logic, layer, {}};
    c.walk(f, true);
    return c.out;
}

FormulaSet antecedents_of(const FormulaSet& s) {
    FormulaSet subs, out;
    for (Formula f : s) collect_subformulas(f, subs);
    for (Formula f : subs)
        if (f.is_cond()) out.insert(f.lhs());
    return out;
}

FormulaSet closure_set(const FormulaSet& input, Logic logic) {
    // formulas the dynamic rules can introduce, one group per conditional
    FormulaSet gen = input, subs;
    for (Formula f : input) collect_subformulas(f, subs);
    for (Formula f : subs) {
        if (!f.is_cond()) continue;
        Formula a = f.lhs(), b = f.rhs();
        if (logic == Logic::P || logic == Logic::R) {
            Formula box = Formula::box_neg(a);
            gen.insert(Formula::neg(box));
            gen.insert(Formula::disj(Formula::neg(box), a));
        } else {
            Formula la = Formula::lmod(a), lb = Formula::lmod(b);
            Formula box = Formula::box_neg(la);
            gen.insert(Formula::neg(la));
            gen.insert(Formula::neg(lb));
            gen.insert(box);
            if (logic == Logic::CL) gen.insert(Formula::disj(Formula::neg(box), la));
        }
    }
    subs.clear();
    for (Formula f : gen) collect_subformulas(f, subs);
    FormulaSet proper;
    for (Formula f : subs) {
        if (f.is_atom()) continue;
        proper.insert(f.lhs());
        if (f.rhs().valid()) proper.insert(f.rhs());
    }
    // A negation gets negated again only when it sits inside something,
    // which keeps the operation idempotent.
    FormulaSet out = subs;
    for (Formula f : subs) {
        if (logic == Logic::C && f.is_box()) continue;
        if (!f.is_neg() || proper.count(f)) out.insert(Formula::neg(f));
    }
    return out;
}

}  // namespace klm
