#include "klm/models.hpp"

#include <algorithm>
#include <stdexcept>

namespace klm {

void PrefModel::resize(int n) {
    val.assign(n, {});
    less.assign(n, std::vector<bool>(n, false));
}

// ---------------------------------------------------------------- evaluation

std::vector<int> min_worlds(const PrefModel& m, Formula a) {
    std::vector<int> out;
    std::vector<bool> sat(m.size());
    for (int w = 0; w < m.size(); ++w) sat[w] = eval_at(m, w, a);
    for (int w = 0; w < m.size(); ++w) {
        if (!sat[w]) continue;
        bool minimal = true;
        for (int v = 0; v < m.size() && minimal; ++v)
            if (sat[v] && m.less[v][w]) minimal = false;
        if (minimal) out.push_back(w);
    }
    return out;
}

bool eval_at(const PrefModel& m, int w, Formula f) {
    switch (f.kind()) {
    case Kind::Atom: return m.val[w].count(f.name()) > 0;
    case Kind::Neg: return !eval_at(m, w, f.sub());
    case Kind::And: return eval_at(m, w, f.lhs()) && eval_at(m, w, f.rhs());
    case Kind::Or: return eval_at(m, w, f.lhs()) || eval_at(m, w, f.rhs());
    case Kind::Implies: return !eval_at(m, w, f.lhs()) || eval_at(m, w, f.rhs());
    case Kind::Cond:
        for (int v : min_worlds(m, f.lhs()))
            if (!eval_at(m, v, f.rhs())) return false;
        return true;
    case Kind::BoxNeg:
        for (int v = 0; v < m.size(); ++v)
            if (m.less[v][w] && eval_at(m, v, f.sub())) return false;
        return true;
    case Kind::LMod:
        throw std::invalid_argument("L has no meaning in a preferential model: " + to_string(f));
    }
    return false;
}

namespace {

bool global_cond(const StateModel& m, Formula f) {
    for (int s : min_states(m, f.lhs()))
        if (!eval_at_state(m, s, f.rhs())) return false;
    return true;
}

}  // namespace

std::vector<int> min_states(const StateModel& m, Formula a) {
    std::vector<int> out;
    std::vector<bool> sat(m.states());
    for (int s = 0; s < m.states(); ++s) sat[s] = eval_at_state(m, s, a);
    for (int s = 0; s < m.states(); ++s) {
        if (!sat[s]) continue;
        bool minimal = true;
        for (int t = 0; t < m.states() && minimal; ++t)
            if (sat[t] && m.less[t][s]) minimal = false;
        if (minimal) out.push_back(s);
    }
    return out;
}

bool eval_at_world(const StateModel& m, int w, Formula f) {
    switch (f.kind()) {
    case Kind::Atom: return m.val[w].count(f.name()) > 0;
    case Kind::Neg: return !eval_at_world(m, w, f.sub());
    case Kind::And: return eval_at_world(m, w, f.lhs()) && eval_at_world(m, w, f.rhs());
    case Kind::Or: return eval_at_world(m, w, f.lhs()) || eval_at_world(m, w, f.rhs());
    case Kind::Implies: return !eval_at_world(m, w, f.lhs()) || eval_at_world(m, w, f.rhs());
    case Kind::Cond: return global_cond(m, f);
    case Kind::BoxNeg:
    case Kind::LMod:
        throw std::invalid_argument("modal formula needs a state: " + to_string(f));
    }
    return false;
}

bool eval_at_state(const StateModel& m, int s, Formula f) {
    if (f.is_propositional()) {
        for (int w : m.label[s])
            if (!eval_at_world(m, w, f)) return false;
        return true;
    }
    switch (f.kind()) {
    case Kind::Neg: return !eval_at_state(m, s, f.sub());
    case Kind::And: return eval_at_state(m, s, f.lhs()) && eval_at_state(m, s, f.rhs());
    case Kind::Or: return eval_at_state(m, s, f.lhs()) || eval_at_state(m, s, f.rhs());
    case Kind::Implies: return !eval_at_state(m, s, f.lhs()) || eval_at_state(m, s, f.rhs());
    case Kind::Cond: return global_cond(m, f);
    case Kind::LMod: return eval_at_state(m, s, f.sub());
    case Kind::BoxNeg:
        for (int t = 0; t < m.states(); ++t)
            if (m.less[t][s] && eval_at_state(m, t, f.sub())) return false;
        return true;
    case Kind::Atom: break;
    }
    return false;
}

bool eval_formula_at(const Model& m, int point, Formula f) {
    if (auto* p = std::get_if<PrefModel>(&m)) return eval_at(*p, point, f);
    return eval_at_world(std::get<StateModel>(m), point, f);
}

bool satisfies(const PointedModel& pm, const FormulaSet& gamma) {
    for (Formula f : gamma)
        if (!eval_formula_at(pm.model, pm.point, f)) return false;
    return true;
}

// ---------------------------------------------------------------- validation

namespace {

using Rel = std::vector<std::vector<bool>>;

void check_order(const Rel& less, bool transitive, bool modular, const char* what, std::vector<std::string>& out) {
    int n = static_cast<int>(less.size());
    auto name = [&](int i) { return std::string(what) + std::to_string(i); };
    for (int a = 0; a < n; ++a)
        if (less[a][a]) out.push_back("not irreflexive: " + name(a) + " < " + name(a));
    if (transitive) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (less[a][b] && less[b][c] && !less[a][c])
                        out.push_back("not transitive: " + name(a) + " < " + name(b) + " < " + name(c));
    }
    if (modular) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (less[a][b] && !less[a][c] && !less[c][b])
                        out.push_back("not modular: " + name(a) + " < " + name(b) + " but " + name(c) +
                                      " is comparable to neither");
    }
}

}  // namespace

std::vector<std::string> validate_model(const PrefModel& m, Logic logic) {
    std::vector<std::string> out;
    if (logic == Logic::C || logic == Logic::CL) return validate_model(as_state_model(m), logic, {});
    if (static_cast<int>(m.less.size()) != m.size()) {
        out.push_back("order matrix has wrong size");
        return out;
    }
    check_order(m.less, true, logic == Logic::R, "w", out);
    return out;
}

std::vector<std::string> validate_model(const StateModel& m, Logic logic, const FormulaSet& antecedents) {
    std::vector<std::string> out;
    if (static_cast<int>(m.less.size()) != m.states()) {
        out.push_back("order matrix has wrong size");
        return out;
    }
    for (int s = 0; s < m.states(); ++s) {
        if (m.label[s].empty()) out.push_back("empty label: s" + std::to_string(s));
        for (int w : m.label[s])
            if (w < 0 || w >= m.worlds()) out.push_back("label of s" + std::to_string(s) + " names an unknown world");
    }
    if (!out.empty()) return out;
    check_order(m.less, logic != Logic::C, logic == Logic::R, "s", out);
    for (Formula a : antecedents) {
        std::vector<int> mins = min_states(m, a);
        for (int s = 0; s < m.states(); ++s) {
            if (!eval_at_state(m, s, a)) continue;
            if (std::find(mins.begin(), mins.end(), s) != mins.end()) continue;
            bool below = false;
            for (int t : mins)
                if (m.less[t][s]) below = true;
            if (!below) out.push_back("not smooth for " + to_string(a) + " at s" + std::to_string(s));
        }
    }
    return out;
}

std::vector<std::string> validate_model(const Model& m, Logic logic, const FormulaSet& antecedents) {
    if (auto* p = std::get_if<PrefModel>(&m)) {
        if (logic == Logic::C || logic == Logic::CL) return validate_model(as_state_model(*p), logic, antecedents);
        return validate_model(*p, logic);
    }
    return validate_model(std::get<StateModel>(m), logic, antecedents);
}

StateModel as_state_model(const PrefModel& m) {
    StateModel s;
    s.val = m.val;
    s.less = m.less;
    for (int w = 0; w < m.size(); ++w) s.label.push_back({w});
    return s;
}

// ---------------------------------------------------------------- enumeration

namespace {

std::vector<Valuation> all_valuations(const std::vector<std::string>& atoms) {
    std::vector<Valuation> out;
    std::size_t n = std::size_t{1} << atoms.size();
    for (std::size_t bits = 0; bits < n; ++bits) {
        Valuation v;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (bits >> i & 1) v.insert(atoms[i]);
        out.push_back(std::move(v));
    }
    return out;
}

// All relations on n points satisfying the filter, as matrices.
std::vector<Rel> relations(int n, bool transitive) {
    std::vector<Rel> out;
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) slots.emplace_back(a, b);
    for (unsigned long long bits = 0; bits < (1ULL << slots.size()); ++bits) {
        Rel r(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (bits >> i & 1) r[slots[i].first][slots[i].second] = true;
        bool ok = true;
        if (transitive)
            for (int a = 0; a < n && ok; ++a)
                for (int b = 0; b < n && ok; ++b)
                    for (int c = 0; c < n && ok; ++c)
                        if (r[a][b] && r[b][c] && !r[a][c]) ok = false;
        // transitive plus irreflexive rules out 2-cycles
        if (ok) out.push_back(std::move(r));
    }
    return out;
}

void multi_linear(int n, int next, std::vector<std::vector<int>>& chains, std::vector<Rel>& out) {
    if (next == n) {
        Rel r(n, std::vector<bool>(n, false));
        for (const auto& ch : chains)
            for (std::size_t i = 0; i < ch.size(); ++i)
                for (std::size_t j = i + 1; j < ch.size(); ++j) r[ch[i]][ch[j]] = true;
        out.push_back(std::move(r));
        return;
    }
    // by index: the recursion may reallocate `chains`
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (std::size_t pos = 0; pos <= chains[c].size(); ++pos) {
            chains[c].insert(chains[c].begin() + static_cast<long>(pos), next);
            multi_linear(n, next + 1, chains, out);
            chains[c].erase(chains[c].begin() + static_cast<long>(pos));
        }
    }
    chains.push_back({next});
    multi_linear(n, next + 1, chains, out);
    chains.pop_back();
}

template <class F>
bool tuples(int len, int base, std::vector<int>& cur, F&& f) {
    if (static_cast<int>(cur.size()) == len) return f(cur);
    for (int i = 0; i < base; ++i) {
        cur.push_back(i);
        bool go = tuples(len, base, cur, f);
        cur.pop_back();
        if (!go) return false;
    }
    return true;
}

}  // namespace

std::vector<Rel> multi_linear_orders(int n) {
    std::vector<Rel> out;
    std::vector<std::vector<int>> chains;
    multi_linear(n, 0, chains, out);
    return out;
}

std::vector<Rel> strict_partial_orders(int n) { return relations(n, true); }
std::vector<Rel> irreflexive_relations(int n) { return relations(n, false); }

bool enumerate_models(const std::vector<std::string>& atoms, int bound, Logic logic,
                      const std::function<bool(const Model&)>& visit, EnumOptions opts) {
    if (bound < 1) throw std::invalid_argument("bound must be at least 1");
    auto vals = all_valuations(atoms);
    int nv = static_cast<int>(vals.size());

    if (logic == Logic::P || logic == Logic::R) {
        for (int n = 1; n <= bound; ++n) {
            std::vector<Rel> orders;
            if (logic == Logic::R) {
                // rank functions onto 0..k-1
                std::vector<int> rk;
                tuples(n, n, rk, [&](const std::vector<int>& r) {
                    int top = *std::max_element(r.begin(), r.end());
                    for (int k = 0; k <= top; ++k)
                        if (std::find(r.begin(), r.end(), k) == r.end()) return true;
                    Rel rel(n, std::vector<bool>(n, false));
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) rel[a][b] = r[a] < r[b];
                    orders.push_back(std::move(rel));
                    return true;
                });
            } else {
                orders = opts.full_partial_orders ? strict_partial_orders(n) : multi_linear_orders(n);
            }
            std::vector<int> assign;
            bool go = tuples(n, nv, assign, [&](const std::vector<int>& vs) {
                for (const auto& o : orders) {
                    PrefModel m;
                    m.less = o;
                    for (int v : vs) m.val.push_back(vals[v]);
                    if (!visit(Model{std::move(m)})) return false;
                }
                return true;
            });
            if (!go) return false;
        }
        return true;
    }

    // state models: a pool of distinct valuations, labels are nonempty subsets of it
    for (int n = 1; n <= bound; ++n) {
        auto orders = logic == Logic::CL ? strict_partial_orders(n) : irreflexive_relations(n);
        for (int p = 1; p <= std::min(bound, nv); ++p) {
            std::vector<int> pool;
            bool go = true;
            // pools as increasing index sequences
            std::function<bool(int)> choose = [&](int from) -> bool {
                if (static_cast<int>(pool.size()) == p) {
                    std::vector<int> labels;
                    return tuples(n, (1 << p) - 1, labels, [&](const std::vector<int>& ls) {
                        for (const auto& o : orders) {
                            StateModel m;
                            for (int v : pool) m.val.push_back(vals[v]);
                            for (int l : ls) {
                                std::vector<int> lab;
                                for (int i = 0; i < p; ++i)
                                    if ((l + 1) >> i & 1) lab.push_back(i);
                                m.label.push_back(std::move(lab));
                            }
                            m.less = o;
                            if (!visit(Model{std::move(m)})) return false;
                        }
                        return true;
                    });
                }
                for (int v = from; v < nv; ++v) {
                    pool.push_back(v);
                    bool more = choose(v + 1);
                    pool.pop_back();
                    if (!more) return false;
                }
                return true;
            };
            go = choose(0);
            if (!go) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- output

namespace {

// rank = length of the longest descending chain, only for modular orders
std::optional<std::vector<int>> ranks(const Rel& less) {
    std::vector<std::string> v;
    check_order(less, true, true, "", v);
    if (!v.empty()) return std::nullopt;
    int n = static_cast<int>(less.size());
    std::vector<int> r(n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (less[b][a]) ++r[a];
    // in a ranked order the number of points below determines the level
    std::vector<int> levels = r;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int& x : r) x = static_cast<int>(std::lower_bound(levels.begin(), levels.end(), x) - levels.begin());
    return r;
}

nlohmann::json pairs(const Rel& less) {
    auto arr = nlohmann::json::array();
    for (std::size_t a = 0; a < less.size(); ++a)
        for (std::size_t b = 0; b < less.size(); ++b)
            if (less[a][b]) arr.push_back({a, b});
    return arr;
}

nlohmann::json worlds_json(const std::vector<Valuation>& val) {
    auto arr = nlohmann::json::array();
    for (std::size_t w = 0; w < val.size(); ++w)
        arr.push_back({{"id", w}, {"atoms", std::vector<std::string>(val[w].begin(), val[w].end())}});
    return arr;
}

std::string atoms_text(const Valuation& v) {
    if (v.empty()) return "-";
    std::string s;
    for (const auto& a : v) s += (s.empty() ? "" : " ") + a;
    return s;
}

}  // namespace

nlohmann::json model_to_json(const PointedModel& pm) {
    nlohmann::json j;
    if (auto* p = std::get_if<PrefModel>(&pm.model)) {
        j["kind"] = "preferential";
        j["worlds"] = worlds_json(p->val);
        if (auto r = ranks(p->less))
            for (int w = 0; w < p->size(); ++w) j["worlds"][w]["rank"] = (*r)[w];
        j["order"] = pairs(p->less);
    } else {
        const auto& s = std::get<StateModel>(pm.model);
        j["kind"] = "state";
        j["worlds"] = worlds_json(s.val);
        auto states = nlohmann::json::array();
        for (int i = 0; i < s.states(); ++i) states.push_back({{"id", i}, {"label", s.label[i]}});
        j["states"] = states;
        j["order"] = pairs(s.less);
    }
    j["point"] = pm.point;
    return j;
}

std::string model_to_text(const PointedModel& pm) {
    std::string out;
    auto order_text = [&](const Rel& less, const char* p) {
        std::string o;
        for (std::size_t a = 0; a < less.size(); ++a)
            for (std::size_t b = 0; b < less.size(); ++b)
                if (less[a][b]) o += std::string(o.empty() ? "" : ", ") + p + std::to_string(a) + " < " + p + std::to_string(b);
        return "order: " + (o.empty() ? std::string("(empty)") : o) + "\n";
    };
    if (auto* p = std::get_if<PrefModel>(&pm.model)) {
        auto r = ranks(p->less);
        for (int w = 0; w < p->size(); ++w) {
            out += "world w" + std::to_string(w) + ": " + atoms_text(p->val[w]);
            if (r) out += "  (rank " + std::to_string((*r)[w]) + ")";
            out += "\n";
        }
        out += order_text(p->less, "w");
    } else {
        const auto& s = std::get<StateModel>(pm.model);
        for (int w = 0; w < s.worlds(); ++w) out += "world w" + std::to_string(w) + ": " + atoms_text(s.val[w]) + "\n";
        for (int i = 0; i < s.states(); ++i) {
            out += "state s" + std::to_string(i) + ": {";
            for (std::size_t k = 0; k < s.label[i].size(); ++k)
                out += (k ? ", w" : "w") + std::to_string(s.label[i][k]);
            out += "}\n";
        }
        out += order_text(s.less, "s");
    }
    out += "point: w" + std::to_string(pm.point) + "\n";
    return out;
}

}  // namespace klm
