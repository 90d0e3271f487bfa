// Bounded model search used as an independent check on the tableau engines.
//
// The search does not walk enumerate_models literally; it walks a quotient
// that preserves satisfiability within the bound:
//  - P: worlds carry valuations, sorted so permuted copies are skipped, and
//    orders are multi-linear (or all strict partial orders on request).
//  - R: a model is a sequence of rank levels of pairwise distinct valuations.
//    A world with the valuation of a lower or same-rank world is never
//    minimal for anything and agrees with it on base formulas.
//  - CL/C: a state only matters through which antecedents and consequents
//    hold at it, so states range over these "types" (with a witness label);
//    states satisfying no antecedent are inert and skipped. The evaluation
//    world is free, as in the tableau where the root world need not see
//    itself through L.

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "klm/models.hpp"

namespace klm {

namespace {

using Mask = std::uint64_t;  // set of valuations, or of points

struct Compiled {
    std::vector<std::string> atoms;
    int nv = 0;  // number of valuations
    Mask full = 0;
    std::vector<Formula> conds;
    std::vector<Mask> ante, cons;  // valuations satisfying antecedent / consequent
    FormulaSet gamma;
    std::unordered_map<std::uint64_t, Mask> sat_cache;

    Mask prop_truth(Formula f) const {
        switch (f.kind()) {
        case Kind::Atom: {
            auto i = std::find(atoms.begin(), atoms.end(), f.name()) - atoms.begin();
            Mask m = 0;
            for (int v = 0; v < nv; ++v)
                if (v >> i & 1) m |= Mask{1} << v;
            return m;
        }
        case Kind::Neg: return full & ~prop_truth(f.sub());
        case Kind::And: return prop_truth(f.lhs()) & prop_truth(f.rhs());
        case Kind::Or: return prop_truth(f.lhs()) | prop_truth(f.rhs());
        case Kind::Implies: return (full & ~prop_truth(f.lhs())) | prop_truth(f.rhs());
        default: throw std::invalid_argument("oracle: not a propositional formula: " + to_string(f));
        }
    }

    // valuations at which f holds, given the truth values of the conditionals
    Mask truth(Formula f, std::uint64_t cm) const {
        switch (f.kind()) {
        case Kind::Cond: {
            auto i = std::find(conds.begin(), conds.end(), f) - conds.begin();
            return (cm >> i & 1) ? full : 0;
        }
        case Kind::Neg: return full & ~truth(f.sub(), cm);
        case Kind::And: return truth(f.lhs(), cm) & truth(f.rhs(), cm);
        case Kind::Or: return truth(f.lhs(), cm) | truth(f.rhs(), cm);
        case Kind::Implies: return (full & ~truth(f.lhs(), cm)) | truth(f.rhs(), cm);
        case Kind::Atom: return prop_truth(f);
        default: throw std::invalid_argument("oracle: modal formula in input: " + to_string(f));
        }
    }

    Mask sat_vals(std::uint64_t cm) {
        auto it = sat_cache.find(cm);
        if (it != sat_cache.end()) return it->second;
        Mask m = full;
        for (Formula f : gamma) m &= truth(f, cm);
        sat_cache.emplace(cm, m);
        return m;
    }
};

Compiled compile(const FormulaSet& gamma) {
    Compiled c;
    c.gamma = gamma;
    auto at = atoms_of(gamma);
    c.atoms.assign(at.begin(), at.end());
    if (c.atoms.size() > 6) throw std::invalid_argument("oracle supports at most 6 atoms");
    c.nv = 1 << c.atoms.size();
    c.full = c.nv == 64 ? ~Mask{0} : (Mask{1} << c.nv) - 1;
    FormulaSet subs;
    for (Formula f : gamma) collect_subformulas(f, subs);
    for (Formula f : subs)
        if (f.is_cond()) c.conds.push_back(f);
    if (c.conds.size() > 64) throw std::invalid_argument("oracle supports at most 64 conditionals");
    for (Formula f : c.conds) {
        c.ante.push_back(c.prop_truth(f.lhs()));
        c.cons.push_back(c.prop_truth(f.rhs()));
    }
    return c;
}

Valuation valuation_of(const Compiled& c, int v) {
    Valuation out;
    for (std::size_t i = 0; i < c.atoms.size(); ++i)
        if (v >> i & 1) out.insert(c.atoms[i]);
    return out;
}

int lowest(Mask m) { return __builtin_ctzll(m); }

// pred[w] = points strictly below w
using Preds = std::vector<std::uint32_t>;

std::vector<Preds> to_preds(const std::vector<std::vector<std::vector<bool>>>& rels) {
    std::vector<Preds> out;
    for (const auto& r : rels) {
        Preds p(r.size(), 0);
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = 0; b < r.size(); ++b)
                if (r[a][b]) p[b] |= 1u << a;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::vector<bool>> to_matrix(const Preds& p) {
    int n = static_cast<int>(p.size());
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            if (p[b] >> a & 1) m[a][b] = true;
    return m;
}

// Truth values of the conditionals. in_ante(i, w) / in_cons(i, w) tell
// whether point w satisfies antecedent / consequent i. Returns false if the
// model is not smooth for some antecedent (only possible without transitivity).
template <class InA, class InB>
bool cond_mask(const Compiled& c, const Preds& pred, InA in_ante, InB in_cons, bool check_smooth, std::uint64_t& cm) {
    int n = static_cast<int>(pred.size());
    cm = 0;
    for (std::size_t i = 0; i < c.conds.size(); ++i) {
        std::uint32_t a = 0;
        for (int w = 0; w < n; ++w)
            if (in_ante(i, w)) a |= 1u << w;
        std::uint32_t min = 0;
        for (int w = 0; w < n; ++w)
            if ((a >> w & 1) && !(pred[w] & a)) min |= 1u << w;
        if (check_smooth)
            for (int w = 0; w < n; ++w)
                if ((a >> w & 1) && !(min >> w & 1) && !(pred[w] & min)) return false;
        bool holds = true;
        for (int w = 0; w < n && holds; ++w)
            if ((min >> w & 1) && !in_cons(i, w)) holds = false;
        if (holds) cm |= std::uint64_t{1} << i;
    }
    return true;
}

template <class F>
bool nondecreasing(int len, int base, std::vector<int>& cur, F&& f) {
    if (static_cast<int>(cur.size()) == len) return f(cur);
    for (int i = cur.empty() ? 0 : cur.back(); i < base; ++i) {
        cur.push_back(i);
        bool go = nondecreasing(len, base, cur, f);
        cur.pop_back();
        if (!go) return false;
    }
    return true;
}

OracleResult search_pref(Compiled& c, Logic logic, int bound, bool full_orders) {
    OracleResult res;
    auto finish = [&](const std::vector<int>& vals, const Preds& pred, Mask good) {
        PrefModel m;
        for (int v : vals) m.val.push_back(valuation_of(c, v));
        m.less = to_matrix(pred);
        int point = 0;
        for (std::size_t w = 0; w < vals.size(); ++w)
            if (good >> vals[w] & 1) {
                point = static_cast<int>(w);
                break;
            }
        res.sat = true;
        res.model = PointedModel{Model{std::move(m)}, point};
    };
    auto try_model = [&](const std::vector<int>& vals, const Preds& pred) {
        ++res.models_checked;
        std::uint64_t cm;
        cond_mask(
            c, pred, [&](std::size_t i, int w) { return (c.ante[i] >> vals[w] & 1) != 0; },
            [&](std::size_t i, int w) { return (c.cons[i] >> vals[w] & 1) != 0; }, false, cm);
        Mask present = 0;
        for (int v : vals) present |= Mask{1} << v;
        Mask good = c.sat_vals(cm) & present;
        if (good) finish(vals, pred, good);
        return good != 0;
    };

    if (logic == Logic::P) {
        for (int n = 1; n <= bound; ++n) {
            auto orders = to_preds(full_orders ? strict_partial_orders(n) : multi_linear_orders(n));
            std::vector<int> vals;
            bool found = !nondecreasing(n, c.nv, vals, [&](const std::vector<int>& vs) {
                for (const auto& o : orders)
                    if (try_model(vs, o)) return false;
                return true;
            });
            if (found) return res;
        }
        return res;
    }

    // R: levels of distinct valuations, lowest level first
    std::vector<int> vals, rank;
    std::function<bool(Mask, int)> grow = [&](Mask used, int level) -> bool {
        if (!vals.empty()) {
            Preds pred(vals.size(), 0);
            for (std::size_t a = 0; a < vals.size(); ++a)
                for (std::size_t b = 0; b < vals.size(); ++b)
                    if (rank[a] < rank[b]) pred[b] |= 1u << a;
            if (try_model(vals, pred)) return true;
        }
        int room = bound - static_cast<int>(vals.size());
        if (room <= 0) return false;
        Mask free = c.full & ~used;
        // nonempty subsets of the unused valuations of size <= room
        for (Mask sub = free; sub; sub = (sub - 1) & free) {
            if (__builtin_popcountll(sub) > room) continue;
            for (Mask s = sub; s; s &= s - 1) {
                vals.push_back(lowest(s));
                rank.push_back(level);
            }
            bool ok = grow(used | sub, level + 1);
            vals.resize(vals.size() - __builtin_popcountll(sub));
            rank.resize(vals.size());
            if (ok) return true;
        }
        return false;
    };
    grow(0, 0);
    return res;
}

OracleResult search_state(Compiled& c, Logic logic, int bound) {
    OracleResult res;
    if (c.nv > 16) throw std::invalid_argument("oracle supports at most 4 atoms for state models");
    int nf = static_cast<int>(c.conds.size());

    // state types: which antecedents and consequents hold at every world of the label
    struct Type {
        std::uint64_t a = 0, b = 0;
        Mask label = 0;
    };
    std::vector<Type> types;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> seen;
    Mask inert = 0;
    Mask labels_end = c.nv == 64 ? 0 : (Mask{1} << c.nv);
    for (Mask x = 1; x != labels_end && x != 0; ++x) {
        Type t;
        t.label = x;
        for (int i = 0; i < nf; ++i) {
            if ((x & c.ante[i]) == x) t.a |= std::uint64_t{1} << i;
            if ((x & c.cons[i]) == x) t.b |= std::uint64_t{1} << i;
        }
        if (t.a == 0) {
            if (!inert) inert = x;
            continue;
        }
        if (seen.emplace(std::make_pair(t.a, t.b), types.size()).second) types.push_back(t);
    }

    auto finish = [&](const std::vector<int>& ts, const Preds& pred, Mask good) {
        StateModel m;
        for (int v = 0; v < c.nv; ++v) m.val.push_back(valuation_of(c, v));
        auto add_label = [&](Mask x) {
            std::vector<int> lab;
            for (int v = 0; v < c.nv; ++v)
                if (x >> v & 1) lab.push_back(v);
            m.label.push_back(std::move(lab));
        };
        for (int t : ts) add_label(types[t].label);
        m.less = to_matrix(pred);
        if (ts.empty()) {
            add_label(inert);
            m.less = {{false}};
        }
        res.sat = true;
        res.model = PointedModel{Model{std::move(m)}, lowest(good)};
    };

    bool smooth = logic == Logic::C;
    for (int n = 0; n <= bound; ++n) {
        if (n == 0) {
            if (!inert) continue;
            ++res.models_checked;
            // no state satisfies an antecedent: every conditional holds vacuously
            std::uint64_t all = nf == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nf) - 1;
            Mask good = c.sat_vals(all);
            if (good) {
                finish({}, {}, good);
                return res;
            }
            continue;
        }
        auto orders = to_preds(logic == Logic::C ? irreflexive_relations(n) : strict_partial_orders(n));
        std::vector<int> ts;
        bool found = !nondecreasing(n, static_cast<int>(types.size()), ts, [&](const std::vector<int>& tv) {
            for (const auto& o : orders) {
                ++res.models_checked;
                std::uint64_t cm;
                bool ok = cond_mask(
                    c, o, [&](std::size_t i, int w) { return (types[tv[w]].a >> i & 1) != 0; },
                    [&](std::size_t i, int w) { return (types[tv[w]].b >> i & 1) != 0; }, smooth, cm);
                if (!ok) continue;
                Mask good = c.sat_vals(cm);
                if (good) {
                    finish(tv, o, good);
                    return false;
                }
            }
            return true;
        });
        if (found) return res;
    }
    return res;
}

}  // namespace

OracleResult oracle_sat(const FormulaSet& gamma, Logic logic, int bound) {
    if (bound < 1) throw std::invalid_argument("bound must be at least 1");
    for (Formula f : gamma)
        if (!validate_language(f, logic, Layer::Base).empty())
            throw std::invalid_argument("oracle input is not in the base language: " + to_string(f));
    Compiled c = compile(gamma);
    OracleResult res = (logic == Logic::P || logic == Logic::R) ? search_pref(c, logic, bound, false)
                                                                : search_state(c, logic, bound);
    // distinct valuations already exhaust every ranked model
    if (logic == Logic::R && !res.sat) res.definitive = bound >= total_size(gamma) || bound >= c.nv;
    if (res.model) {
        auto problems = validate_model(res.model->model, logic, antecedents_of(gamma));
        if (!problems.empty() || !satisfies(*res.model, gamma))
            throw std::logic_error("oracle produced an invalid model");
    }
    return res;
}

OracleResult oracle_sat_full_orders(const FormulaSet& gamma, int bound) {
    Compiled c = compile(gamma);
    return search_pref(c, Logic::P, bound, true);
}

}  // namespace klm
