#include "klm/engine_cl.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "unlabelled.hpp"

namespace klm {

std::vector<TableauNode> apply_L_minus(const TableauNode& n) {
    FormulaSet ldown = project(n, Projection::LDown);
    std::vector<TableauNode> out;
    for (Formula f : n.gamma) {
        if (!f.is_negated(Kind::LMod)) continue;
        TableauNode s{ldown, {}};
        s.gamma.insert(Formula::neg(f.sub().sub()));
        out.push_back(std::move(s));
    }
    if (out.empty() && !ldown.empty()) out.push_back(TableauNode{ldown, {}});
    if (out.empty()) throw std::invalid_argument("apply_L_minus: no [L] formula");
    return out;
}

namespace detail {

namespace {

Valuation valuation(const FormulaSet& s) {
    Valuation v;
    for (Formula f : s)
        if (f.is_atom()) v.insert(f.name());
    return v;
}

}  // namespace

PointedModel chains_to_state_model(const Witness& w) {
    std::vector<const Chain*> chains{&w.root};
    for (const Chain& c : w.side) chains.push_back(&c);

    StateModel m;
    std::vector<std::vector<int>> rel;          // R_X per world
    std::vector<std::pair<int, int>> less;      // <_X before closure
    for (const Chain* c : chains) {
        std::vector<int> good;
        std::vector<std::vector<int>> bad_of;
        for (const ChainWorld& g : *c) {
            int gi = static_cast<int>(m.val.size());
            good.push_back(gi);
            m.val.push_back(valuation(g.gamma));
            rel.emplace_back();
            // equal successors of one parent collapse into one world
            std::vector<FormulaSet> distinct;
            for (const FormulaSet& b : g.bad)
                if (std::find(distinct.begin(), distinct.end(), b) == distinct.end()) distinct.push_back(b);
            std::vector<int> bad;
            for (const FormulaSet& b : distinct) {
                bad.push_back(static_cast<int>(m.val.size()));
                m.val.push_back(valuation(b));
                rel.emplace_back();
            }
            rel[gi] = bad.empty() ? std::vector<int>{gi} : bad;
            for (int b : bad) rel[b] = bad;
            bad_of.push_back(bad);
        }
        // lower chain worlds are preferred to upper ones, and to the upper ones' successors
        for (std::size_t i = 0; i < good.size(); ++i)
            for (std::size_t j = i + 1; j < good.size(); ++j) {
                less.emplace_back(good[j], good[i]);
                for (int b : bad_of[i]) less.emplace_back(good[j], b);
            }
    }
    int n = static_cast<int>(m.val.size());
    m.label = rel;
    for (auto& l : m.label) std::sort(l.begin(), l.end());
    m.less.assign(n, std::vector<bool>(n, false));
    for (auto [a, b] : less) m.less[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (m.less[i][k])
                for (int j = 0; j < n; ++j)
                    if (m.less[k][j]) m.less[i][j] = true;
    for (int i = 0; i < n; ++i)
        if (m.less[i][i]) throw std::logic_error("extracted preference relation is cyclic");
    return {Model{std::move(m)}, 0};
}

}  // namespace detail

Verdict decide_cl(const FormulaSet& gamma, const EngineOptions& opt) {
    check_input(gamma, Logic::CL);
    if (opt.naive) throw std::invalid_argument("the plain calculus engine is only available for P and R");
    auto t0 = std::chrono::steady_clock::now();
    detail::Witness w;
    Verdict v = detail::general_check(gamma, Logic::CL, opt, &w);
    if (v.sat() && opt.model) v.model = detail::chains_to_state_model(w);
    detail::check_model(v, gamma, Logic::CL);
    v.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

}  // namespace klm
