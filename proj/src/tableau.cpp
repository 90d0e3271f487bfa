#include "klm/tableau.hpp"

#include <functional>
#include <sstream>

namespace klm {

FormulaSet project(const FormulaSet& gamma, Projection p) {
    FormulaSet out;
    for (Formula f : gamma) {
        switch (p) {
        case Projection::Box:
            if (f.is_box()) out.insert(f);
            break;
        case Projection::BoxDown:
            if (f.is_box()) out.insert(Formula::neg(f.sub()));
            break;
        case Projection::CondPos:
            if (f.is_cond()) out.insert(f);
            break;
        case Projection::CondNeg:
            if (f.is_negated(Kind::Cond)) out.insert(f);
            break;
        case Projection::CondPM:
            if (f.is_cond() || f.is_negated(Kind::Cond)) out.insert(f);
            break;
        case Projection::LDown:
            if (f.is_l()) out.insert(f.sub());
            break;
        }
    }
    return out;
}

bool is_axiom(const FormulaSet& gamma) {
    for (Formula f : gamma)
        if (f.is_negated(Kind::Atom) && gamma.count(f.sub())) return true;
    return false;
}

std::optional<BoolRule> boolean_rule(Formula f) {
    using V = std::vector<std::vector<Formula>>;
    auto n = [](Formula x) { return Formula::neg(x); };
    switch (f.kind()) {
    case Kind::And: return BoolRule{"&+", V{{f.lhs(), f.rhs()}}};
    case Kind::Or: return BoolRule{"|+", V{{f.lhs()}, {f.rhs()}}};
    case Kind::Implies: return BoolRule{"->+", V{{n(f.lhs())}, {f.rhs()}}};
    case Kind::Neg: {
        Formula g = f.sub();
        switch (g.kind()) {
        case Kind::Neg: return BoolRule{"~~", V{{g.sub()}}};
        case Kind::And: return BoolRule{"&-", V{{n(g.lhs())}, {n(g.rhs())}}};
        case Kind::Or: return BoolRule{"|-", V{{n(g.lhs()), n(g.rhs())}}};
        case Kind::Implies: return BoolRule{"->-", V{{g.lhs(), n(g.rhs())}}};
        default: return std::nullopt;
        }
    }
    default: return std::nullopt;
    }
}

std::vector<Formula> cond_plus_branches(Formula c, Logic logic) {
    Formula a = c.lhs(), b = c.rhs();
    if (logic == Logic::CL) {
        Formula la = Formula::lmod(a);
        return {Formula::neg(la), Formula::neg(Formula::box_neg(la)), Formula::lmod(b)};
    }
    return {Formula::neg(a), Formula::neg(Formula::box_neg(a)), b};
}

std::optional<RuleApplication> next_static_rule(const TableauNode& n, Logic logic) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Formula f : n.gamma) {
            auto r = boolean_rule(f);
            if (!r || r->branching() != (pass == 1)) continue;
            RuleApplication app{r->name, f, {}};
            for (const auto& add : r->branches) {
                TableauNode c = n;
                c.gamma.erase(f);
                c.gamma.insert(add.begin(), add.end());
                app.conclusions.push_back(std::move(c));
            }
            return app;
        }
    }
    // C has no static conditional rule
    if (logic == Logic::C) return std::nullopt;
    for (Formula f : n.gamma) {
        if (!f.is_cond()) continue;
        RuleApplication app{"|~+", f, {}};
        for (Formula g : cond_plus_branches(f, logic)) {
            TableauNode c = n;
            c.gamma.erase(f);
            c.sigma.insert(f);
            c.gamma.insert(g);
            app.conclusions.push_back(std::move(c));
        }
        return app;
    }
    return std::nullopt;
}

bool is_saturated(const TableauNode& n, Logic logic) {
    for (Formula f : n.gamma) {
        if (auto r = boolean_rule(f)) {
            // a principal counts as processed when one of its branches is already present
            bool done = false;
            for (const auto& add : r->branches) {
                bool all = true;
                for (Formula g : add) all = all && n.gamma.count(g);
                done = done || all;
            }
            if (!done) return false;
        }
        if (logic != Logic::C && f.is_cond()) {
            bool done = false;
            for (Formula g : cond_plus_branches(f, logic)) done = done || n.gamma.count(g);
            if (!done) return false;
        }
    }
    return true;
}

std::vector<Saturation> expand_static(const TableauNode& n, Logic logic) {
    std::vector<Saturation> out;
    std::vector<RuleStep> steps;
    std::function<void(const TableauNode&)> go = [&](const TableauNode& cur) {
        if (is_axiom(cur)) return;
        auto app = next_static_rule(cur, logic);
        if (!app) {
            out.push_back({cur, steps});
            return;
        }
        for (const auto& c : app->conclusions) {
            steps.push_back({app->rule, app->principal});
            go(c);
            steps.pop_back();
        }
    };
    go(n);
    return out;
}

// ---- traces ----

int Trace::add(TraceNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

namespace {

void walk(const std::vector<TraceNode>& nodes, int root, const std::function<void(int, int)>& visit) {
    // depth-first, children in order; visit(old index, depth)
    std::function<void(int, int)> go = [&](int i, int d) {
        visit(i, d);
        for (int c : nodes[i].children) go(c, d + 1);
    };
    if (root >= 0) go(root, 0);
}

}  // namespace

nlohmann::json Trace::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    // a node may be shared by memoized subproofs; each occurrence gets its own id
    std::size_t k = 0;
    std::function<int(int)> emit = [&](int i) -> int {
        int id = static_cast<int>(k++);
        nlohmann::json j;
        const TraceNode& n = nodes_[i];
        j["id"] = id;
        j["rule"] = n.rule;
        if (!n.principal.empty()) j["principal"] = n.principal;
        j["formulas"] = n.formulas;
        if (!n.used.empty()) j["used"] = n.used;
        if (!n.relations.empty()) j["relations"] = n.relations;
        arr.push_back(j);
        std::size_t slot = arr.size() - 1;
        std::vector<int> kids;
        for (int c : n.children) kids.push_back(emit(c));
        arr[slot]["children"] = kids;
        return id;
    };
    if (root >= 0) emit(root);
    return arr;
}

std::string Trace::to_text() const {
    std::ostringstream os;
    walk(nodes_, root, [&](int i, int d) {
        const TraceNode& n = nodes_[i];
        os << std::string(2 * d, ' ');
        std::string set;
        for (std::size_t k = 0; k < n.formulas.size(); ++k) set += (k ? ", " : "") + n.formulas[k];
        os << "{" << set << "}";
        if (!n.used.empty()) {
            std::string u;
            for (std::size_t k = 0; k < n.used.size(); ++k) u += (k ? ", " : "") + n.used[k];
            os << " ; {" << u << "}";
        }
        if (!n.relations.empty()) {
            std::string r;
            for (std::size_t k = 0; k < n.relations.size(); ++k) r += (k ? ", " : "") + n.relations[k];
            os << " ; " << r;
        }
        os << "  [" << n.rule;
        if (!n.principal.empty()) os << " on " << n.principal;
        os << "]\n";
    });
    return os.str();
}

int Trace::reachable() const {
    int count = 0;
    walk(nodes_, root, [&](int, int) { ++count; });
    return count;
}

bool Trace::uses_rule(const std::string& rule) const {
    bool found = false;
    walk(nodes_, root, [&](int i, int) { found = found || nodes_[i].rule == rule; });
    return found;
}

void check_input(const FormulaSet& gamma, Logic logic) {
    for (Formula f : gamma) {
        auto v = validate_language(f, logic, Layer::Base);
        if (!v.empty()) throw LanguageError(to_string(f) + ": " + v.front());
    }
}

TraceNode trace_node(const TableauNode& n, std::string rule, Formula principal) {
    TraceNode t;
    t.rule = std::move(rule);
    if (principal.valid()) t.principal = to_string(principal);
    t.formulas = sorted_strings(n.gamma);
    t.used = sorted_strings(n.sigma);
    return t;
}

}  // namespace klm
