#include "klm/engine_r.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <chrono>
#include <random>
#include <stdexcept>

namespace klm {

std::string label_name(Label x) { return "x" + std::to_string(x); }

LabelledNode initial_node(const FormulaSet& gamma) {
    LabelledNode n;
    n.input = std::make_shared<const FormulaSet>(gamma);
    n.labels.insert(0);
    for (Formula f : gamma) add_formula(n, 0, f);
    return n;
}

void add_formula(LabelledNode& n, Label x, Formula f) {
    n.labels.insert(x);
    if (f.is_cond())
        n.used.try_emplace(f);
    else
        n.world.insert({x, f});
}

void add_relation(LabelledNode& n, Label lower, Label upper) {
    n.labels.insert(lower);
    n.labels.insert(upper);
    n.rel.insert({lower, upper});
    std::vector<Formula> boxes;
    for (auto it = n.world.lower_bound({upper, Formula{}}); it != n.world.end() && it->first == upper; ++it)
        if (it->second.is_box()) boxes.push_back(it->second);
    for (Formula b : boxes) {
        n.world.insert({lower, Formula::neg(b.sub())});
        n.world.insert({lower, b});
    }
}

bool is_axiom(const LabelledNode& n) {
    for (const auto& [x, f] : n.world)
        if (f.is_negated(Kind::Atom) && n.world.count({x, f.sub()})) return true;
    for (const auto& [x, y] : n.rel)
        if (x == y || n.rel.count({y, x})) return true;
    return false;
}

// ---- measure ----

namespace {

void conds_by_polarity(Formula f, bool positive, std::vector<Formula>& pos, std::vector<Formula>& neg) {
    switch (f.kind()) {
    case Kind::Cond: (positive ? pos : neg).push_back(f); break;
    case Kind::Neg: conds_by_polarity(f.sub(), !positive, pos, neg); break;
    case Kind::And:
    case Kind::Or:
        conds_by_polarity(f.lhs(), positive, pos, neg);
        conds_by_polarity(f.rhs(), positive, pos, neg);
        break;
    case Kind::Implies:
        conds_by_polarity(f.lhs(), !positive, pos, neg);
        conds_by_polarity(f.rhs(), positive, pos, neg);
        break;
    default: break;
    }
}

// pair ordering lexicographic; multiset ordering on top of it
bool multiset_less(std::vector<std::pair<int, int>> a, std::vector<std::pair<int, int>> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) return false;
    // a < b iff every element in excess in a is dominated by some element in excess in b
    std::vector<std::pair<int, int>> only_a, only_b;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
    for (const auto& x : only_a) {
        bool dominated = false;
        for (const auto& y : only_b) dominated = dominated || x < y;
        if (!dominated) return false;
    }
    return true;
}

}  // namespace

bool operator==(const RMeasure& a, const RMeasure& b) {
    auto ca = a.c2, cb = b.c2;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    return a.c1 == b.c1 && ca == cb && a.c3 == b.c3 && a.c4 == b.c4 && a.c5 == b.c5;
}

bool operator<(const RMeasure& a, const RMeasure& b) {
    if (a.c1 != b.c1) return a.c1 < b.c1;
    if (multiset_less(a.c2, b.c2)) return true;
    if (multiset_less(b.c2, a.c2)) return false;
    auto ca = a.c2, cb = b.c2;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    if (ca != cb) return false;  // unreachable: the multiset order is total on distinct multisets of a total order
    if (a.c3 != b.c3) return a.c3 < b.c3;
    if (a.c4 != b.c4) return a.c4 < b.c4;
    return a.c5 < b.c5;
}

RMeasure measure_r(const LabelledNode& n) {
    RMeasure m;
    // boxes and negated boxes the input can give rise to
    std::vector<Formula> pos, neg;
    if (n.input)
        for (Formula f : *n.input) conds_by_polarity(f, true, pos, neg);
    FormulaSet lplus;
    for (Formula c : pos) lplus.insert(c.lhs());
    for (Formula c : neg) lplus.insert(c.lhs());
    std::vector<Formula> lminus;  // multiset of antecedents
    for (Formula c : pos) lminus.push_back(c.lhs());
    int n0 = static_cast<int>(lplus.size()), k0 = static_cast<int>(lminus.size());

    for (const auto& [x, f] : n.world) {
        if (f.is_negated(Kind::Cond)) ++m.c1;
        m.c5 += f.cp();
    }
    for (const auto& [c, used] : n.used) {
        m.c5 += c.cp();
        for (Label x : n.labels)
            if (!used.count(x)) ++m.c3;
    }
    for (Label x : n.labels) {
        int boxed = 0;
        for (Formula a : lplus)
            if (n.has(x, Formula::box_neg(a))) ++boxed;
        int expanded = 0;
        for (Formula a : lminus) {
            Formula box = Formula::box_neg(a);
            bool below = false;
            for (const auto& [y, z] : n.rel)
                if (z == x && n.has(y, box)) below = true;
            if (below) ++expanded;
        }
        m.c2.emplace_back(n0 - boxed, k0 - expanded);
    }
    std::sort(m.c2.begin(), m.c2.end());
    for (Label z : n.labels)
        for (const auto& [x, y] : n.rel)
            if (!n.rel.count({x, z}) && !n.rel.count({z, y})) ++m.c4;
    return m;
}

// ---- rules ----

LabelledNode apply_box_minus_r(const LabelledNode& n, Label x, Formula principal) {
    if (!principal.is_negated(Kind::BoxNeg) || !n.has(x, principal))
        throw std::invalid_argument("apply_box_minus_r: principal is not a negated box at the label");
    Formula a = principal.sub().sub();
    LabelledNode c = n;
    Label y = c.next++;
    add_formula(c, y, a);
    add_formula(c, y, Formula::box_neg(a));
    add_relation(c, y, x);
    return c;
}

std::pair<LabelledNode, LabelledNode> apply_modularity(const LabelledNode& n, Label x, Label y, Label z) {
    if (!n.rel.count({x, y}) || !n.labels.count(z) || n.rel.count({x, z}) || n.rel.count({z, y}))
        throw std::invalid_argument("apply_modularity: side condition does not hold");
    LabelledNode a = n, b = n;
    add_relation(a, z, y);
    add_relation(b, x, z);
    return {std::move(a), std::move(b)};
}

namespace {

struct StaticApp {
    std::string rule;
    std::string principal;
    std::vector<LabelledNode> conclusions;
};

std::string lf(Label x, Formula f) { return label_name(x) + ": " + to_string(f); }

class RSearch {
public:
    RSearch(const FormulaSet& gamma, const EngineOptions& opt, Verdict& v) : opt_(opt), v_(v) {
        if (opt.trace) v_.trace.emplace();
        if (opt.shuffle_seed) rng_.seed(*opt.shuffle_seed);
        auto names = atoms_of(gamma);
        if (names.size() <= 6) atoms_.assign(names.begin(), names.end());
        else atoms_.clear(), semantic_ = false;
    }

    struct Result {
        bool sat = false;
        int trace = -1;
        std::shared_ptr<LabelledNode> witness;
    };

    Result saturate(const LabelledNode& n) {
        ++v_.stats.nodes;
        v_.stats.labels = std::max(v_.stats.labels, static_cast<int>(n.labels.size()));
        if (is_axiom(n)) return fail(add_trace(n, "ax", "", {}));
        auto app = pick_static(n, false);
        if (!app) return dynamic(n);
        return expand(n, *app);
    }

private:
    Result expand(const LabelledNode& n, const StaticApp& a) {
        const StaticApp* app = &a;
        ++v_.stats.rule_apps;
        std::vector<int> kids;
        for (std::size_t i = 0; i < app->conclusions.size(); ++i) {
            const LabelledNode& c = app->conclusions[i];
            Result r = saturate(c);
            audit(n, c, app->rule, [&] { return r.sat; });
            if (r.sat) {
                for (std::size_t j = i + 1; j < app->conclusions.size(); ++j)
                    audit(n, app->conclusions[j], app->rule, [&] { return saturate(app->conclusions[j]).sat; });
                return r;
            }
            kids.push_back(r.trace);
        }
        return fail(add_trace(n, app->rule, app->principal, kids));
    }

    static Result fail(int trace) {
        Result r;
        r.trace = trace;
        return r;
    }

    Result dynamic(const LabelledNode& b) {
        // (|~-) on every negated conditional, each with a fresh label
        for (const auto& [x, f] : b.world) {
            if (!f.is_negated(Kind::Cond)) continue;
            LabelledNode c = b;
            c.world.erase({x, f});
            Label y = c.next++;
            Formula a = f.sub().lhs();
            add_formula(c, y, a);
            add_formula(c, y, Formula::box_neg(a));
            add_formula(c, y, Formula::neg(f.sub().rhs()));
            ++v_.stats.rule_apps;
            Result r = saturate(c);
            audit(b, c, "|~-", [&] { return r.sat; });
            if (r.sat) return r;
            return fail(add_trace(b, "|~-", lf(x, f), {r.trace}));
        }
        for (const auto& [x, f] : b.world) {
            if (!f.is_negated(Kind::BoxNeg) || b.considered.count({x, f})) continue;
            Formula a = f.sub().sub(), box = f.sub();
            if (!opt_.naive) {
                // a label already minimal for A must lie below x
                for (Label z : b.labels) {
                    if (!b.has(z, a) || !b.has(z, box)) continue;
                    LabelledNode c = b;
                    c.considered.insert({x, f});
                    add_relation(c, z, x);
                    Result r = saturate(c);
                    if (r.sat) return r;
                    return fail(add_trace(b, "reuse", lf(x, f) + " with " + label_name(z), {r.trace}));
                }
            }
            LabelledNode c = apply_box_minus_r(b, x, f);
            c.considered.insert({x, f});
            ++v_.stats.rule_apps;
            Result r = saturate(c);
            audit(b, c, "[]-", [&] { return r.sat; });
            if (r.sat) return r;
            return fail(add_trace(b, "[]-", lf(x, f), {r.trace}));
        }
        // propositional branching, postponed to here
        if (auto app = pick_static(b, true)) return expand(b, *app);
        Result r;
        r.sat = true;
        r.witness = std::make_shared<LabelledNode>(b);
        return r;
    }

    // A static rule instance, built into conclusions only once chosen.
    struct Candidate {
        enum Kind { Bool, Cond, Modularity, BoxMinus } kind;
        Label x;
        Formula f;  // boolean principal or conditional
        Label y = 0, z = 0;
        int open = 0;       // conclusions not refuted at sight
        bool core = false;  // principal in an unsatisfiable core of its label
    };

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

    // Valuations compatible with the propositional formulas at each label.
    std::map<Label, std::uint64_t> label_masks(const LabelledNode& n) {
        std::map<Label, std::uint64_t> out;
        for (Label x : n.labels) out[x] = ~0ull;
        if (!semantic_) return out;
        for (const auto& [x, f] : n.world)
            if (f.is_propositional()) out[x] &= models(f);
        return out;
    }

    // Adding gs at x closes the branch for certain: a syntactic complement
    // is already there, or the label's propositional content becomes
    // unsatisfiable (the boolean rules then close it).
    bool refuted(const LabelledNode& n, const std::map<Label, std::uint64_t>& mask, Label x,
                 const std::vector<Formula>& gs) {
        std::uint64_t m = mask.at(x);
        for (Formula g : gs) {
            if (n.has(x, complement(g))) return true;
            if (g.is_negated(Kind::BoxNeg) && box_minus_closes(n, x, g)) return true;
            if (semantic_ && g.is_propositional()) m &= models(g);
        }
        return semantic_ && m == 0;
    }

    // (□-) on x:g would create a label whose propositional content (A and
    // the negations of x's boxed formulas) is unsatisfiable.
    bool box_minus_closes(const LabelledNode& n, Label x, Formula g) {
        if (!semantic_) return false;
        Formula a = g.sub().sub();
        if (!a.is_propositional()) return false;
        std::uint64_t m = models(a);
        for (auto it = n.world.lower_bound({x, Formula{}}); it != n.world.end() && it->first == x; ++it)
            if (it->second.is_box() && it->second.sub().is_propositional()) m &= ~models(it->second.sub());
        return m == 0;
    }

    // Greedily shrinks the propositional formulas at x to a subset that is
    // still unsatisfiable.
    void unsat_core(const LabelledNode& n, Label x, std::set<std::pair<Label, Formula>>& out) {
        std::vector<Formula> fs;
        for (auto it = n.world.lower_bound({x, Formula{}}); it != n.world.end() && it->first == x; ++it)
            if (it->second.is_propositional()) fs.push_back(it->second);
        std::vector<bool> keep(fs.size(), true);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            std::uint64_t m = ~0ull;
            for (std::size_t j = 0; j < fs.size(); ++j)
                if (j != i && keep[j]) m &= models(fs[j]);
            if (m == 0) keep[i] = false;
        }
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (keep[i]) out.insert({x, fs[i]});
    }

    // lower<upper clashes with an existing relation or with upper's boxes at lower
    bool relation_refuted(const LabelledNode& n, const std::map<Label, std::uint64_t>& mask, Label lower,
                          Label upper) {
        if (lower == upper || n.rel.count({upper, lower})) return true;
        std::vector<Formula> copied;
        for (auto it = n.world.lower_bound({upper, Formula{}}); it != n.world.end() && it->first == upper; ++it)
            if (it->second.is_box()) {
                copied.push_back(Formula::neg(it->second.sub()));
                copied.push_back(it->second);
            }
        return refuted(n, mask, lower, copied);
    }

    static std::vector<Formula> cond_alternatives(const LabelledNode& n, Label x, Formula c) {
        std::vector<Formula> alts{Formula::neg(c.lhs()), Formula::neg(Formula::box_neg(c.lhs())), c.rhs()};
        // a conclusion that adds nothing decides the premise on its own
        for (Formula g : alts)
            if (n.has(x, g)) return {g};
        return alts;
    }

    // Every applicable static instance in priority order: boolean rules,
    // (|~+) per conditional and unused label, (<) per relation and label.
    std::vector<Candidate> candidates(const LabelledNode& n) {
        std::vector<Candidate> out;
        auto mask = label_masks(n);
        std::set<std::pair<Label, Formula>> core;
        for (const auto& [x, m] : mask)
            if (semantic_ && m == 0) unsat_core(n, x, core);
        for (const auto& [x, f] : n.world) {
            auto r = boolean_rule(f);
            if (!r) continue;
            Candidate c{Candidate::Bool, x, f};
            c.core = core.count({x, f}) > 0;
            for (const auto& add : r->branches)
                c.open += !refuted(n, mask, x, add);
            out.push_back(c);
        }
        // a (□-) step that closes at once is worth taking before saturation
        for (const auto& [x, f] : n.world)
            if (f.is_negated(Kind::BoxNeg) && !n.considered.count({x, f}) && box_minus_closes(n, x, f))
                out.push_back(Candidate{Candidate::BoxMinus, x, f});
        for (const auto& [f, used] : n.used)
            for (Label x : n.labels) {
                if (used.count(x)) continue;
                Candidate c{Candidate::Cond, x, f};
                for (Formula g : cond_alternatives(n, x, f)) c.open += !refuted(n, mask, x, {g});
                out.push_back(c);
            }
        for (const auto& [x, y] : n.rel)
            for (Label z : n.labels) {
                if (n.rel.count({x, z}) || n.rel.count({z, y})) continue;
                Candidate c{Candidate::Modularity, x, Formula{}, y, z};
                c.open = !relation_refuted(n, mask, z, y) + !relation_refuted(n, mask, x, z);
                out.push_back(c);
            }
        return out;
    }

    static StaticApp build(const LabelledNode& n, const Candidate& c) {
        StaticApp app;
        switch (c.kind) {
        case Candidate::Bool: {
            auto r = boolean_rule(c.f);
            app.rule = r->name;
            app.principal = lf(c.x, c.f);
            for (const auto& add : r->branches) {
                LabelledNode k = n;
                k.world.erase({c.x, c.f});
                for (Formula g : add) add_formula(k, c.x, g);
                app.conclusions.push_back(std::move(k));
            }
            break;
        }
        case Candidate::Cond:
            app.rule = "|~+";
            app.principal = to_string(c.f) + " at " + label_name(c.x);
            for (Formula g : cond_alternatives(n, c.x, c.f)) {
                LabelledNode k = n;
                k.used[c.f].insert(c.x);
                add_formula(k, c.x, g);
                app.conclusions.push_back(std::move(k));
            }
            break;
        case Candidate::BoxMinus: {
            LabelledNode k = apply_box_minus_r(n, c.x, c.f);
            k.considered.insert({c.x, c.f});
            app.rule = "[]-";
            app.principal = lf(c.x, c.f);
            app.conclusions.push_back(std::move(k));
            break;
        }
        case Candidate::Modularity: {
            auto [a, b] = apply_modularity(n, c.x, c.y, c.z);
            app.rule = "<";
            app.principal = label_name(c.x) + " < " + label_name(c.y) + " with " + label_name(c.z);
            app.conclusions.push_back(std::move(a));
            app.conclusions.push_back(std::move(b));
            break;
        }
        }
        return app;
    }

    // Static rules are invertible, so any order is complete. Non-branching
    // boolean rules go first, then any instance whose conclusions all close
    // (at an inconsistent label only rules on its unsatisfiable core), then
    // the rest by fewest open conclusions. Branching rules on propositional
    // formulas of a consistent label only fix the label's valuation; they
    // are held back (`with_propositional` false) until no dynamic rule
    // applies, so they never multiply the dynamic part of the search.
    std::optional<StaticApp> pick_static(const LabelledNode& n, bool with_propositional) {
        auto cs = candidates(n);
        auto tier = [](const Candidate& c) {
            bool prop = c.kind == Candidate::Bool && c.f.is_propositional();
            if (c.kind == Candidate::Bool && boolean_rule(c.f)->branches.size() == 1) return 0;
            if (c.open == 0 && (!prop || c.core)) return 1;
            return prop ? 3 : 2;
        };
        std::erase_if(cs, [&](const Candidate& c) { return tier(c) == 3 && !with_propositional; });
        if (cs.empty()) return std::nullopt;
        if (opt_.shuffle_seed) {
            std::uniform_int_distribution<std::size_t> d(0, cs.size() - 1);
            return build(n, cs[d(rng_)]);
        }
        const Candidate* best = nullptr;
        int best_tier = 4;
        for (const auto& c : cs) {
            int t = tier(c);
            if (t == 0) return build(n, c);
            if (t < best_tier || (t == best_tier && c.open < best->open)) {
                best = &c;
                best_tier = t;
            }
        }
        return build(n, *best);
    }

    template <class F>
    void audit(const LabelledNode& prem, const LabelledNode& concl, const std::string& rule, F&& concl_sat) {
        if (!opt_.audit) return;
        ++v_.stats.measure_checks;
        if (measure_r(concl) < measure_r(prem)) return;
        if (!concl_sat()) return;
        ++v_.stats.measure_violations;
        v_.audit_log.push_back(rule + ": " + show(measure_r(prem)) + " => " + show(measure_r(concl)));
    }

    static std::string show(const RMeasure& m) {
        std::string c2;
        for (const auto& [n, k] : m.c2) c2 += (c2.empty() ? "" : " ") + std::to_string(n) + "/" + std::to_string(k);
        return "<" + std::to_string(m.c1) + ", [" + c2 + "], " + std::to_string(m.c3) + ", " + std::to_string(m.c4) +
               ", " + std::to_string(m.c5) + ">";
    }

    int add_trace(const LabelledNode& n, const std::string& rule, const std::string& principal, std::vector<int> kids) {
        if (!v_.trace) return -1;
        TraceNode t;
        t.rule = rule;
        t.principal = principal;
        for (const auto& [x, f] : n.world) t.formulas.push_back(lf(x, f));
        std::sort(t.formulas.begin(), t.formulas.end());
        for (const auto& [c, used] : n.used) {
            std::string s = to_string(c) + " :";
            for (Label x : used) s += " " + label_name(x);
            t.used.push_back(s);
        }
        std::sort(t.used.begin(), t.used.end());
        for (const auto& [x, y] : n.rel) t.relations.push_back(label_name(x) + " < " + label_name(y));
        t.children = std::move(kids);
        return v_.trace->add(std::move(t));
    }

    const EngineOptions& opt_;
    Verdict& v_;
    std::mt19937_64 rng_;
    std::vector<std::string> atoms_;
    bool semantic_ = true;
    std::map<Formula, std::uint64_t> models_;
};

PointedModel canonical_model(const LabelledNode& n) {
    std::vector<Label> labels(n.labels.begin(), n.labels.end());
    auto index = [&](Label x) { return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), x) - labels.begin()); };
    PrefModel m;
    m.resize(static_cast<int>(labels.size()));
    for (const auto& [x, f] : n.world)
        if (f.is_atom()) m.val[index(x)].insert(f.name());
    for (const auto& [x, y] : n.rel) m.less[index(x)][index(y)] = true;
    return {Model{std::move(m)}, index(0)};
}

}  // namespace

Verdict decide_r(const FormulaSet& gamma, const EngineOptions& opt) {
    check_input(gamma, Logic::R);
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    RSearch s(gamma, opt, v);
    auto r = s.saturate(initial_node(gamma));
    v.status = r.sat ? Status::Sat : Status::Unsat;
    if (!r.sat && v.trace) v.trace->root = r.trace;
    if (r.sat && opt.model) {
        v.model = canonical_model(*r.witness);
        auto problems = validate_model(v.model->model, Logic::R, antecedents_of(gamma));
        if (!problems.empty()) throw std::logic_error("extracted model is not ranked: " + problems.front());
        if (!satisfies(*v.model, gamma)) throw std::logic_error("extracted model does not satisfy the input");
    }
    v.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace klm
