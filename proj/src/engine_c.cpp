#include "klm/engine_c.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace klm {

namespace {

RuleApplication boolean_instance(const CNode& n, Formula f, const BoolRule& r) {
    RuleApplication app{r.name, f, {}};
    for (const auto& add : r.branches) {
        TableauNode c{n, {}};
        c.gamma.erase(f);
        c.gamma.insert(add.begin(), add.end());
        app.conclusions.push_back(std::move(c));
    }
    return app;
}

std::vector<RuleApplication> dynamic_instances(const CNode& n) {
    std::vector<RuleApplication> out;
    FormulaSet pm = project(n, Projection::CondPM);
    FormulaSet down = project(n, Projection::BoxDown);
    FormulaSet ldown = project(n, Projection::LDown);
    bool any_neg_l = false;
    for (Formula f : n) {
        if (f.is_cond()) {
            Formula la = Formula::lmod(f.lhs()), lb = Formula::lmod(f.rhs()), box = Formula::box_neg(la);
            RuleApplication app{"|~+", f, {}};
            TableauNode left{n, {}};
            left.gamma.insert(Formula::neg(la));
            // the folded weak cut: jump to a minimal A-state
            TableauNode mid{pm, {}};
            mid.gamma.insert(down.begin(), down.end());
            mid.gamma.insert({f, la, box});
            TableauNode right{n, {}};
            right.gamma.insert({la, box, lb});
            app.conclusions = {std::move(left), std::move(mid), std::move(right)};
            out.push_back(std::move(app));
        } else if (f.is_negated(Kind::Cond)) {
            Formula c = f.sub();
            Formula la = Formula::lmod(c.lhs());
            TableauNode s{pm, {}};
            s.gamma.erase(f);
            s.gamma.insert({la, Formula::box_neg(la), Formula::neg(Formula::lmod(c.rhs()))});
            out.push_back({"|~-", f, {std::move(s)}});
        } else if (f.is_negated(Kind::LMod)) {
            any_neg_l = true;
            TableauNode s{ldown, {}};
            s.gamma.insert(Formula::neg(f.sub().sub()));
            out.push_back({"L-", f, {std::move(s)}});
        }
    }
    if (!any_neg_l && !ldown.empty()) out.push_back({"L-", Formula{}, {TableauNode{ldown, {}}}});
    return out;
}

bool loops(const CNode& n, const RuleApplication& app) {
    for (const auto& c : app.conclusions)
        if (c.gamma == n) return true;
    return false;
}

// Boolean rules are invertible, so the search applies the first one alone
// (non-branching first); the remaining rules only at saturated nodes.
std::vector<RuleApplication> search_instances(const CNode& n) {
    for (int pass = 0; pass < 2; ++pass)
        for (Formula f : n)
            if (auto r = boolean_rule(f); r && r->branching() == (pass == 1)) return {boolean_instance(n, f, *r)};
    std::vector<RuleApplication> out;
    for (auto& app : dynamic_instances(n))
        if (!loops(n, app)) out.push_back(std::move(app));
    return out;
}

}  // namespace

std::vector<RuleApplication> applicable_rule_instances_c(const CNode& n) {
    std::vector<RuleApplication> out;
    for (Formula f : n)
        if (auto r = boolean_rule(f)) {
            auto app = boolean_instance(n, f, *r);
            if (!loops(n, app)) out.push_back(std::move(app));
        }
    for (auto& app : dynamic_instances(n))
        if (!loops(n, app)) out.push_back(std::move(app));
    return out;
}

Verdict decide_c(const FormulaSet& gamma, const EngineOptions& opt, CSearchReport* report) {
    check_input(gamma, Logic::C);
    if (opt.naive) throw std::invalid_argument("the plain calculus engine is only available for P and R");
    auto t0 = std::chrono::steady_clock::now();
    const FormulaSet closure = closure_set(gamma, Logic::C);

    struct Instance {
        int premise;
        std::string rule;
        Formula principal;
        std::vector<int> conclusions;  // distinct node ids
        int pending = 0;
    };
    std::map<CNode, int> ids;
    std::vector<const CNode*> nodes;
    std::vector<std::vector<int>> used_by;  // node -> instances having it as a conclusion
    std::vector<std::vector<int>> own;      // node -> its instances
    std::vector<Instance> insts;
    std::vector<bool> axiom;
    CSearchReport rep;

    std::deque<int> todo;
    auto intern = [&](const CNode& n) {
        auto [it, fresh] = ids.emplace(n, static_cast<int>(nodes.size()));
        if (fresh) {
            if (!std::includes(closure.begin(), closure.end(), n.begin(), n.end())) rep.within_closure = false;
            nodes.push_back(&it->first);
            used_by.emplace_back();
            own.emplace_back();
            axiom.push_back(is_axiom(n));
            todo.push_back(it->second);
        }
        return it->second;
    };
    intern(gamma);
    while (!todo.empty()) {
        int id = todo.front();
        todo.pop_front();
        if (axiom[id]) continue;
        for (auto& app : search_instances(*nodes[id])) {
            Instance in{id, app.rule, app.principal, {}, 0};
            for (const auto& c : app.conclusions) {
                int cid = intern(c.gamma);
                if (std::find(in.conclusions.begin(), in.conclusions.end(), cid) == in.conclusions.end())
                    in.conclusions.push_back(cid);
            }
            in.pending = static_cast<int>(in.conclusions.size());
            int iid = static_cast<int>(insts.size());
            for (int c : in.conclusions) used_by[c].push_back(iid);
            own[id].push_back(iid);
            insts.push_back(std::move(in));
        }
    }

    // least fixpoint by counting unrefuted conclusions per instance
    std::size_t n = nodes.size();
    std::vector<bool> refuted(n, false);
    std::vector<int> witness(n, -1);
    std::vector<int> work;
    for (std::size_t i = 0; i < n; ++i)
        if (axiom[i]) {
            refuted[i] = true;
            work.push_back(static_cast<int>(i));
        }
    while (!work.empty()) {
        int id = work.back();
        work.pop_back();
        for (int iid : used_by[id]) {
            Instance& in = insts[iid];
            if (--in.pending == 0 && !refuted[in.premise]) {
                refuted[in.premise] = true;
                witness[in.premise] = iid;
                work.push_back(in.premise);
            }
        }
    }
    for (std::size_t i = 0; i < n && rep.fixpoint; ++i) {
        bool expect = axiom[i];
        for (int iid : own[i]) {
            bool all = true;
            for (int c : insts[iid].conclusions) all = all && refuted[c];
            expect = expect || all;
        }
        if (expect != refuted[i]) rep.fixpoint = false;
    }
    rep.nodes = static_cast<long long>(n);
    rep.instances = static_cast<long long>(insts.size());
    if (!rep.within_closure) throw std::logic_error("C search left the closure of the input");
    if (!rep.fixpoint) throw std::logic_error("C refutability table is not a fixpoint");

    Verdict v;
    v.status = refuted[0] ? Status::Unsat : Status::Sat;
    v.stats.nodes = rep.nodes;
    v.stats.rule_apps = rep.instances;
    if (opt.trace && refuted[0]) {
        Trace t;
        std::map<int, int> done;
        // witnesses were refuted strictly earlier than their premises, so this terminates
        std::function<int(int)> build = [&](int id) -> int {
            if (auto it = done.find(id); it != done.end()) return it->second;
            TraceNode tn;
            tn.formulas = sorted_strings(*nodes[id]);
            if (witness[id] < 0) {
                tn.rule = "ax";
            } else {
                const Instance& in = insts[witness[id]];
                tn.rule = in.rule;
                if (in.principal.valid()) tn.principal = to_string(in.principal);
                for (int c : in.conclusions) tn.children.push_back(build(c));
            }
            int tid = t.add(std::move(tn));
            done[id] = tid;
            return tid;
        };
        t.root = build(0);
        v.trace = std::move(t);
    }
    if (report) *report = rep;
    v.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace klm
