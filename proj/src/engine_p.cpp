#include "klm/engine_p.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "unlabelled.hpp"

namespace klm {

namespace {

Formula boxed_antecedent(Formula c, Logic logic) {
    Formula a = c.lhs();
    return Formula::box_neg(logic == Logic::CL ? Formula::lmod(a) : a);
}

}  // namespace

PMeasure measure_p(const TableauNode& n, Logic logic) {
    PMeasure m;
    auto count_c2 = [&](Formula f) {
        if (f.is_cond() && !n.gamma.count(boxed_antecedent(f, logic))) ++m.c2;
    };
    for (Formula f : n.gamma) {
        if (f.is_negated(Kind::Cond)) ++m.c1;
        if (f.is_cond()) ++m.c3;
        count_c2(f);
        m.c4 += f.cp();
    }
    for (Formula f : n.sigma)
        if (!n.gamma.count(f)) count_c2(f);
    return m;
}

TableauNode apply_neg_cond_p(const TableauNode& n, Formula principal, Logic logic) {
    if (!principal.is_negated(Kind::Cond) || !n.gamma.count(principal))
        throw std::invalid_argument("apply_neg_cond_p: principal is not a negated conditional of the node");
    Formula a = principal.sub().lhs(), b = principal.sub().rhs();
    if (logic == Logic::CL) {
        a = Formula::lmod(a);
        b = Formula::lmod(b);
    }
    TableauNode out;
    out.gamma = project(n, Projection::CondPos);
    out.gamma.insert(n.sigma.begin(), n.sigma.end());
    out.gamma.insert(a);
    out.gamma.insert(Formula::box_neg(a));
    out.gamma.insert(Formula::neg(b));
    return out;
}

std::vector<TableauNode> apply_box_minus_strong(const TableauNode& n, Logic logic) {
    std::vector<Formula> xs;  // X for every ~[]~X
    for (Formula f : n.gamma)
        if (f.is_negated(Kind::BoxNeg) && (logic != Logic::CL || f.sub().sub().is_l())) xs.push_back(f.sub().sub());
    if (xs.empty()) throw std::invalid_argument("apply_box_minus_strong: no negated box formula");
    FormulaSet common = project(n, Projection::CondPM);
    common.insert(n.sigma.begin(), n.sigma.end());
    for (Formula f : project(n, Projection::Box)) common.insert(f);
    for (Formula f : project(n, Projection::BoxDown)) common.insert(f);
    std::vector<TableauNode> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        TableauNode c;
        c.gamma = common;
        c.gamma.insert(xs[i]);
        c.gamma.insert(Formula::box_neg(xs[i]));
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) c.gamma.insert(Formula::disj(Formula::neg(Formula::box_neg(xs[j])), xs[j]));
        out.push_back(std::move(c));
    }
    return out;
}

TableauNode apply_neg_cond_plain(const TableauNode& n, Formula principal) {
    if (!principal.is_negated(Kind::Cond) || !n.gamma.count(principal))
        throw std::invalid_argument("apply_neg_cond_plain: principal is not a negated conditional of the node");
    Formula a = principal.sub().lhs(), b = principal.sub().rhs();
    TableauNode out;
    out.gamma = project(n, Projection::CondPM);
    out.gamma.erase(principal);
    out.gamma.insert(n.sigma.begin(), n.sigma.end());
    out.gamma.insert(a);
    out.gamma.insert(Formula::box_neg(a));
    out.gamma.insert(Formula::neg(b));
    return out;
}

TableauNode apply_box_minus_plain(const TableauNode& n, Formula principal) {
    if (!principal.is_negated(Kind::BoxNeg) || !n.gamma.count(principal))
        throw std::invalid_argument("apply_box_minus_plain: principal is not a negated box of the node");
    Formula a = principal.sub().sub();
    TableauNode out;
    out.gamma = project(n, Projection::CondPM);
    out.gamma.insert(n.sigma.begin(), n.sigma.end());
    for (Formula f : project(n, Projection::Box)) out.gamma.insert(f);
    for (Formula f : project(n, Projection::BoxDown)) out.gamma.insert(f);
    out.gamma.insert(a);
    out.gamma.insert(Formula::box_neg(a));
    return out;
}

namespace detail {

namespace {

struct Result {
    bool sat = false;
    int trace = -1;
    Chain chain;
    std::vector<Chain> side;
    int world = -1;  // naive engine
};

Result fail(int trace) {
    Result r;
    r.trace = trace;
    return r;
}

Result pass() {
    Result r;
    r.sat = true;
    return r;
}

class Search {
public:
    using Leaf = std::function<Result(const TableauNode&)>;

    Search(const FormulaSet& gamma, Logic logic, const EngineOptions& opt, Verdict& v)
        : logic_(logic), opt_(opt), v_(v) {
        if (opt.trace) v_.trace.emplace();
        auto names = atoms_of(gamma);
        if (names.size() <= 6) atoms_.assign(names.begin(), names.end());
        else semantic_ = false;
    }

    Result saturate(const TableauNode& n, const Leaf& leaf) {
        ++v_.stats.nodes;
        if (is_axiom(n)) return fail(add_trace(n, "ax", {}, {}));
        Masks m = masks(n.gamma);
        if (auto early = early_l_minus(n, m)) {
            ++v_.stats.rule_apps;
            Result r = saturate(early->first, [](const TableauNode&) { return pass(); });
            if (r.sat) throw std::logic_error("an inconsistent (L-) successor has an open branch");
            return fail(add_trace(n, "L-", early->second, {r.trace}));
        }
        auto app = pick_static(n, m);
        if (!app) return leaf(n);
        ++v_.stats.rule_apps;
        std::vector<int> kids;
        for (std::size_t i = 0; i < app->conclusions.size(); ++i) {
            const TableauNode& c = app->conclusions[i];
            Result r = saturate(c, leaf);
            audit(n, c, app->rule, [&] { return r.sat; });
            if (r.sat) {
                for (std::size_t j = i + 1; j < app->conclusions.size(); ++j)
                    audit(n, app->conclusions[j], app->rule,
                          [&] { return saturate(app->conclusions[j], leaf).sat; });
                return r;
            }
            kids.push_back(r.trace);
        }
        return fail(add_trace(n, app->rule, app->principal, kids));
    }

    // CHECK: some saturated branch whose dynamic obligations can be met
    Result check(const TableauNode& n) {
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
        Result r = saturate(n, [this](const TableauNode& b) { return check_leaf(b); });
        memo_.emplace(n, r);
        return r;
    }

    // GENERAL-CHECK leaf: the branch itself and every negated conditional
    Result general_leaf(const TableauNode& b) {
        Result r0 = check(b);
        if (!r0.sat) return r0;
        Result out;
        out.sat = true;
        out.chain = r0.chain;
        for (Formula c : project(b, Projection::CondNeg)) {
            TableauNode n = apply_neg_cond_p(b, c, logic_);
            ++v_.stats.rule_apps;
            Result r = check(n);
            audit(b, n, "|~-", [&] { return r.sat; });
            if (!r.sat) return fail(add_trace(b, "|~-", c, {r.trace}));
            out.side.push_back(r.chain);
        }
        return out;
    }

    // ---- plain calculus (P only) ----
    struct NaiveWorld {
        FormulaSet gamma;
        std::vector<int> below;
        std::vector<int> side;
    };
    std::vector<NaiveWorld> worlds;

    Result naive(const TableauNode& n) {
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
        Result r = saturate(n, [this](const TableauNode& b) { return naive_leaf(b); });
        memo_.emplace(n, r);
        return r;
    }

    Result naive_leaf(const TableauNode& b) {
        NaiveWorld w{b.gamma, {}, {}};
        auto run = [&](const TableauNode& c, const char* rule, Formula principal, std::vector<int>& into) -> Result {
            ++v_.stats.rule_apps;
            Result r = naive(c);
            audit(b, c, rule, [&] { return r.sat; });
            if (!r.sat) return fail(add_trace(b, rule, principal, {r.trace}));
            into.push_back(r.world);
            return pass();
        };
        for (Formula c : project(b, Projection::CondNeg)) {
            Result r = run(apply_neg_cond_plain(b, c), "|~-", c, w.side);
            if (!r.sat) return r;
        }
        for (Formula f : b.gamma) {
            if (!f.is_negated(Kind::BoxNeg)) continue;
            Result r = run(apply_box_minus_plain(b, f), "[]-", f, w.below);
            if (!r.sat) return r;
        }
        Result out;
        out.sat = true;
        out.world = static_cast<int>(worlds.size());
        worlds.push_back(std::move(w));
        return out;
    }

private:
    static Formula complement(Formula g) { return g.is_neg() ? g.sub() : Formula::neg(g); }

    // Valuations (over at most six atoms) satisfying a propositional formula.
    std::uint64_t models(Formula f) {
        if (auto it = models_.find(f); it != models_.end()) return it->second;
        const std::uint64_t all = atoms_.size() == 6 ? ~0ull : (1ull << (1u << atoms_.size())) - 1;
        std::uint64_t m = 0;
        switch (f.kind()) {
        case Kind::Atom: {
            auto i = std::find(atoms_.begin(), atoms_.end(), f.name()) - atoms_.begin();
            for (unsigned v = 0; v < (1u << atoms_.size()); ++v)
                if ((v >> i) & 1) m |= 1ull << v;
            break;
        }
        case Kind::Neg: m = all & ~models(f.sub()); break;
        case Kind::And: m = models(f.lhs()) & models(f.rhs()); break;
        case Kind::Or: m = models(f.lhs()) | models(f.rhs()); break;
        case Kind::Implies: m = (all & ~models(f.lhs())) | models(f.rhs()); break;
        default: m = all;
        }
        models_.emplace(f, m);
        return m;
    }

    struct Masks {
        std::uint64_t prop = ~0ull;  // propositional formulas of the node
        std::uint64_t l = ~0ull;     // CL: bodies of its [L] formulas
        std::vector<std::uint64_t> neg_l;  // CL: countermodels of each ~[L] body
    };

    Masks masks(const FormulaSet& gamma) {
        Masks m;
        if (!semantic_) return m;
        for (Formula f : gamma) {
            if (f.is_propositional()) m.prop &= models(f);
            if (logic_ != Logic::CL) continue;
            if (f.is_l() && f.sub().is_propositional()) m.l &= models(f.sub());
            if (f.is_negated(Kind::LMod) && f.sub().sub().is_propositional()) m.neg_l.push_back(~models(f.sub().sub()));
        }
        return m;
    }

    // an (L-) successor is propositionally inconsistent
    static bool l_closes(const Masks& m) {
        if (m.l == 0) return true;
        for (std::uint64_t c : m.neg_l)
            if ((m.l & c) == 0) return true;
        return false;
    }

    // adding gs to the node closes it for certain: a complement is present,
    // the propositional content becomes inconsistent, or (CL) an (L-)
    // successor does
    bool refuted(const TableauNode& n, Masks m, const std::vector<Formula>& gs) {
        for (Formula g : gs) {
            if (n.gamma.count(complement(g))) return true;
            if (!semantic_) continue;
            if (g.is_propositional()) m.prop &= models(g);
            if (logic_ != Logic::CL) continue;
            if (g.is_l() && g.sub().is_propositional()) m.l &= models(g.sub());
            if (g.is_negated(Kind::LMod) && g.sub().sub().is_propositional()) m.neg_l.push_back(~models(g.sub().sub()));
        }
        return semantic_ && (m.prop == 0 || l_closes(m));
    }

    // CL: an (L-) step taken before saturation when its successor closes
    // at once
    std::optional<std::pair<TableauNode, Formula>> early_l_minus(const TableauNode& n, const Masks& m) {
        if (logic_ != Logic::CL || !semantic_ || !l_closes(m)) return std::nullopt;
        TableauNode s{project(n, Projection::LDown), {}};
        std::optional<Formula> principal;
        for (Formula f : n.gamma) {
            if (!f.is_negated(Kind::LMod) || !f.sub().sub().is_propositional()) continue;
            if (m.l == 0 || (m.l & ~models(f.sub().sub())) == 0) {
                principal = f;
                break;
            }
        }
        if (principal) s.gamma.insert(Formula::neg(principal->sub().sub()));
        return std::make_pair(std::move(s), principal.value_or(Formula{}));
    }

    // Static rules are invertible, so any order reaches the same saturated
    // leaves. Non-branching boolean rules first; then a rule whose
    // conclusions all close (on an inconsistent node only rules on a
    // greedy unsatisfiable core); then (|~+) by fewest open conclusions;
    // propositional branching last.
    std::optional<RuleApplication> pick_static(const TableauNode& n, const Masks& mask) {
        std::vector<Formula> props;
        if (semantic_)
            for (Formula f : n.gamma)
                if (f.is_propositional()) props.push_back(f);
        std::set<Formula> core;
        if (semantic_ && mask.prop == 0) {
            std::vector<bool> keep(props.size(), true);
            for (std::size_t i = 0; i < props.size(); ++i) {
                std::uint64_t m = ~0ull;
                for (std::size_t j = 0; j < props.size(); ++j)
                    if (j != i && keep[j]) m &= models(props[j]);
                if (m == 0) keep[i] = false;
            }
            for (std::size_t i = 0; i < props.size(); ++i)
                if (keep[i]) core.insert(props[i]);
        }
        Formula best;
        int best_tier = 4, best_open = 0;
        auto consider = [&](Formula f, int tier, int open) {
            if (tier < best_tier || (tier == best_tier && open < best_open)) {
                best = f;
                best_tier = tier;
                best_open = open;
            }
        };
        for (Formula f : n.gamma) {
            if (auto r = boolean_rule(f)) {
                if (r->branches.size() == 1) return build(n, f);
                int open = 0;
                for (const auto& add : r->branches) open += !refuted(n, mask, add);
                bool prop = f.is_propositional();
                consider(f, open == 0 && (!prop || core.empty() || core.count(f)) ? 1 : prop ? 3 : 2, open);
            } else if (f.is_cond() && logic_ != Logic::C) {
                int open = 0;
                for (Formula g : cond_plus_branches(f, logic_)) open += !refuted(n, mask, {g});
                consider(f, open == 0 ? 1 : 2, open);
            }
        }
        if (best_tier == 4) return std::nullopt;
        return build(n, best);
    }

    RuleApplication build(const TableauNode& n, Formula f) {
        if (auto r = boolean_rule(f)) {
            RuleApplication app{r->name, f, {}};
            for (const auto& add : r->branches) {
                TableauNode c = n;
                c.gamma.erase(f);
                c.gamma.insert(add.begin(), add.end());
                app.conclusions.push_back(std::move(c));
            }
            return app;
        }
        RuleApplication app{"|~+", f, {}};
        for (Formula g : cond_plus_branches(f, logic_)) {
            TableauNode c = n;
            c.gamma.erase(f);
            c.sigma.insert(f);
            c.gamma.insert(g);
            app.conclusions.push_back(std::move(c));
        }
        return app;
    }

    // CHECK after saturation
    Result check_leaf(const TableauNode& b) {
        ChainWorld world{b.gamma, {}, false};
        if (logic_ == Logic::CL) {
            FormulaSet ldown = project(b, Projection::LDown);
            std::vector<Formula> neg_l;
            for (Formula f : b.gamma) {
                if (f.is_l() || f.is_negated(Kind::LMod)) world.has_l = true;
                if (f.is_negated(Kind::LMod)) neg_l.push_back(f);
            }
            std::vector<std::pair<TableauNode, Formula>> succ;
            for (Formula f : neg_l) {
                TableauNode s{ldown, {}};
                s.gamma.insert(Formula::neg(f.sub().sub()));
                succ.emplace_back(std::move(s), f);
            }
            if (neg_l.empty() && !ldown.empty()) succ.emplace_back(TableauNode{ldown, {}}, Formula{});
            for (const auto& [s, principal] : succ) {
                ++v_.stats.rule_apps;
                Result r = saturate(s, [](const TableauNode& leaf) {
                    Result ok;
                    ok.sat = true;
                    ok.chain = {ChainWorld{leaf.gamma, {}, false}};
                    return ok;
                });
                audit(b, s, "L-", [&] { return r.sat; });
                if (!r.sat) return fail(add_trace(b, "L-", principal, {r.trace}));
                world.bad.push_back(r.chain.front().gamma);
            }
        }
        bool any_box = false;
        for (Formula f : b.gamma) any_box = any_box || f.is_negated(Kind::BoxNeg);
        if (!any_box) {
            Result out;
            out.sat = true;
            out.chain = {std::move(world)};
            return out;
        }
        ++v_.stats.rule_apps;
        std::vector<int> kids;
        auto concl = apply_box_minus_strong(b, logic_);
        for (std::size_t i = 0; i < concl.size(); ++i) {
            Result r = check(concl[i]);
            audit(b, concl[i], "[]-s", [&] { return r.sat; });
            if (r.sat) {
                for (std::size_t j = i + 1; j < concl.size(); ++j)
                    audit(b, concl[j], "[]-s", [&] { return check(concl[j]).sat; });
                Result out;
                out.sat = true;
                out.chain = {std::move(world)};
                out.chain.insert(out.chain.end(), r.chain.begin(), r.chain.end());
                return out;
            }
            kids.push_back(r.trace);
        }
        return fail(add_trace(b, "[]-s", {}, kids));
    }

    template <class F>
    void audit(const TableauNode& prem, const TableauNode& concl, const std::string& rule, F&& concl_sat) {
        if (!opt_.audit) return;
        ++v_.stats.measure_checks;
        if (measure_p(concl, logic_) < measure_p(prem, logic_)) return;
        if (!concl_sat()) return;  // the conclusion's subtree closes
        ++v_.stats.measure_violations;
        v_.audit_log.push_back(rule + ": " + to_string(prem.gamma) + " => " + to_string(concl.gamma));
    }

    int add_trace(const TableauNode& n, const std::string& rule, Formula principal, std::vector<int> kids) {
        if (!v_.trace) return -1;
        TraceNode t = trace_node(n, rule, principal);
        t.children = std::move(kids);
        return v_.trace->add(std::move(t));
    }

    Logic logic_;
    const EngineOptions& opt_;
    Verdict& v_;
    std::map<TableauNode, Result> memo_;
    std::vector<std::string> atoms_;
    bool semantic_ = true;
    std::map<Formula, std::uint64_t> models_;
};

Valuation valuation(const FormulaSet& s) {
    Valuation v;
    for (Formula f : s)
        if (f.is_atom()) v.insert(f.name());
    return v;
}

// Transitive closure in place; returns false on a cycle.
bool close_transitively(std::vector<std::vector<bool>>& less) {
    std::size_t n = less.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (less[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (less[k][j]) less[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (less[i][i]) return false;
    return true;
}

PointedModel naive_model(const Search& s, int root) {
    // worlds reachable from the root world
    std::map<int, int> index;
    std::vector<int> order;
    std::function<void(int)> visit = [&](int w) {
        if (index.count(w)) return;
        index[w] = static_cast<int>(order.size());
        order.push_back(w);
        for (int c : s.worlds[w].below) visit(c);
        for (int c : s.worlds[w].side) visit(c);
    };
    visit(root);
    PrefModel m;
    m.resize(static_cast<int>(order.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        m.val[i] = valuation(s.worlds[order[i]].gamma);
        for (int c : s.worlds[order[i]].below) m.less[index[c]][i] = true;
    }
    if (!close_transitively(m.less)) throw std::logic_error("extracted preference relation is cyclic");
    return {Model{std::move(m)}, 0};
}

}  // namespace

PointedModel chains_to_pref_model(const Witness& w) {
    PrefModel m;
    std::vector<const Chain*> chains{&w.root};
    for (const Chain& c : w.side) chains.push_back(&c);
    int total = 0;
    for (const Chain* c : chains) total += static_cast<int>(c->size());
    m.resize(total);
    int base = 0;
    for (const Chain* c : chains) {
        for (std::size_t i = 0; i < c->size(); ++i) {
            m.val[base + i] = valuation((*c)[i].gamma);
            for (std::size_t j = i + 1; j < c->size(); ++j) m.less[base + j][base + i] = true;
        }
        base += static_cast<int>(c->size());
    }
    if (!close_transitively(m.less)) throw std::logic_error("extracted preference relation is cyclic");
    return {Model{std::move(m)}, 0};
}

Verdict general_check(const FormulaSet& gamma, Logic logic, const EngineOptions& opt, Witness* witness) {
    Verdict v;
    Search s(gamma, logic, opt, v);
    TableauNode root{gamma, {}};
    Result r = s.saturate(root, [&s](const TableauNode& b) { return s.general_leaf(b); });
    v.status = r.sat ? Status::Sat : Status::Unsat;
    if (r.sat && witness) *witness = Witness{r.chain, r.side};
    if (!r.sat && v.trace) v.trace->root = r.trace;
    return v;
}

Verdict naive_check(const FormulaSet& gamma, const EngineOptions& opt) {
    Verdict v;
    Search s(gamma, Logic::P, opt, v);
    Result r = s.naive(TableauNode{gamma, {}});
    v.status = r.sat ? Status::Sat : Status::Unsat;
    if (!r.sat && v.trace) v.trace->root = r.trace;
    if (r.sat && opt.model) v.model = naive_model(s, r.world);
    return v;
}

void check_model(const Verdict& v, const FormulaSet& gamma, Logic logic) {
    if (!v.model) return;
    auto problems = validate_model(v.model->model, logic, antecedents_of(gamma));
    if (!problems.empty()) throw std::logic_error("extracted model is not a " + std::string(logic_name(logic)) + " model: " + problems.front());
    if (!satisfies(*v.model, gamma)) throw std::logic_error("extracted model does not satisfy the input");
}

}  // namespace detail

Verdict decide_p(const FormulaSet& gamma, const EngineOptions& opt) {
    check_input(gamma, Logic::P);
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    if (opt.naive) {
        v = detail::naive_check(gamma, opt);
    } else {
        detail::Witness w;
        v = detail::general_check(gamma, Logic::P, opt, &w);
        if (v.sat() && opt.model) v.model = detail::chains_to_pref_model(w);
    }
    detail::check_model(v, gamma, Logic::P);
    v.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace klm
