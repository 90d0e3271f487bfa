#include "klm/formula.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace klm {

struct FormulaNode {
    Kind kind;
    std::string name;
    const FormulaNode* a;
    const FormulaNode* b;
    std::uint32_t id;
    bool prop;
    bool cond_inside;
    bool modal_inside;
    int cp;
    int size;
};

namespace {

struct Key {
    Kind kind;
    std::string name;
    const FormulaNode* a;
    const FormulaNode* b;
    bool operator==(const Key&) const = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = std::hash<std::string>{}(k.name);
        h ^= std::hash<const void*>{}(k.a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<const void*>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h * 31 + static_cast<std::size_t>(k.kind);
    }
};

// Nodes live for the whole process; deque keeps addresses stable.
struct Arena {
    std::mutex mu;
    std::deque<FormulaNode> nodes;
    std::unordered_map<Key, const FormulaNode*, KeyHash> index;
};

Arena& arena() {
    static Arena a;
    return a;
}

}  // namespace

Formula Formula::make(Kind k, std::string_view name, Formula a, Formula b) {
    Arena& ar = arena();
    std::lock_guard lock(ar.mu);
    Key key{k, std::string(name), a.node_, b.node_};
    if (auto it = ar.index.find(key); it != ar.index.end()) return Formula(it->second);

    FormulaNode n{k, std::string(name), a.node_, b.node_, static_cast<std::uint32_t>(ar.nodes.size()),
                  true, false, false, 1, 1};
    switch (k) {
    case Kind::Atom:
        break;
    case Kind::Neg:
        n.prop = a.node_->prop;
        n.cond_inside = a.node_->cond_inside;
        n.modal_inside = a.node_->modal_inside;
        n.cp = 1 + a.node_->cp;
        n.size = 1 + a.node_->size;
        break;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
        n.prop = a.node_->prop && b.node_->prop;
        n.cond_inside = a.node_->cond_inside || b.node_->cond_inside;
        n.modal_inside = a.node_->modal_inside || b.node_->modal_inside;
        n.cp = 1 + a.node_->cp + b.node_->cp;
        n.size = 1 + a.node_->size + b.node_->size;
        break;
    case Kind::Cond:
        n.prop = false;
        n.cond_inside = true;
        n.modal_inside = a.node_->modal_inside || b.node_->modal_inside;
        n.cp = 3 + a.node_->cp + b.node_->cp;
        n.size = 1 + a.node_->size + b.node_->size;
        break;
    case Kind::BoxNeg:
        n.prop = false;
        n.cond_inside = a.node_->cond_inside;
        n.modal_inside = true;
        n.cp = 2 + a.node_->cp;  // 1 + cp(~body)
        n.size = 1 + a.node_->size;
        break;
    case Kind::LMod:
        n.prop = false;
        n.cond_inside = a.node_->cond_inside;
        n.modal_inside = true;
        n.cp = 1 + a.node_->cp;
        n.size = 1 + a.node_->size;
        break;
    }
    ar.nodes.push_back(std::move(n));
    const FormulaNode* p = &ar.nodes.back();
    ar.index.emplace(std::move(key), p);
    return Formula(p);
}

Formula Formula::atom(std::string_view name) {
    assert(!name.empty());
    return make(Kind::Atom, name, {}, {});
}
Formula Formula::neg(Formula f) { return make(Kind::Neg, {}, f, {}); }
Formula Formula::conj(Formula l, Formula r) { return make(Kind::And, {}, l, r); }
Formula Formula::disj(Formula l, Formula r) { return make(Kind::Or, {}, l, r); }
Formula Formula::implies(Formula l, Formula r) { return make(Kind::Implies, {}, l, r); }
Formula Formula::cond(Formula a, Formula c) { return make(Kind::Cond, {}, a, c); }
Formula Formula::box_neg(Formula body) { return make(Kind::BoxNeg, {}, body, {}); }
Formula Formula::lmod(Formula body) { return make(Kind::LMod, {}, body, {}); }

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
Formula Formula::sub() const { return Formula(node_->a); }
Formula Formula::lhs() const { return Formula(node_->a); }
Formula Formula::rhs() const { return Formula(node_->b); }
std::uint32_t Formula::id() const { return node_->id; }
bool Formula::is_propositional() const { return node_->prop; }
bool Formula::has_cond() const { return node_->cond_inside; }
bool Formula::has_modal() const { return node_->modal_inside; }
int Formula::cp() const { return node_->cp; }
int Formula::size() const { return node_->size; }

std::strong_ordering operator<=>(Formula a, Formula b) {
    std::uint32_t x = a.node_ ? a.node_->id + 1 : 0;
    std::uint32_t y = b.node_ ? b.node_->id + 1 : 0;
    return x <=> y;
}

namespace {

// binding strength: higher binds tighter
int prec(Kind k) {
    switch (k) {
    case Kind::Cond: return 0;
    case Kind::Implies: return 1;
    case Kind::Or: return 2;
    case Kind::And: return 3;
    default: return 4;
    }
}

void print(Formula f, std::string& out) {
    auto wrap = [&](Formula g, bool paren) {
        if (paren) out += '(';
        print(g, out);
        if (paren) out += ')';
    };
    switch (f.kind()) {
    case Kind::Atom:
        out += f.name();
        return;
    case Kind::Neg:
        out += '~';
        wrap(f.sub(), prec(f.sub().kind()) < 4);
        return;
    case Kind::BoxNeg:
        out += "[]~";
        wrap(f.sub(), prec(f.sub().kind()) < 4);
        return;
    case Kind::LMod:
        out += "[L]";
        wrap(f.sub(), prec(f.sub().kind()) < 4);
        return;
    case Kind::And:
    case Kind::Or: {
        // left associative
        int p = prec(f.kind());
        wrap(f.lhs(), prec(f.lhs().kind()) < p);
        out += f.kind() == Kind::And ? " & " : " | ";
        wrap(f.rhs(), prec(f.rhs().kind()) <= p);
        return;
    }
    case Kind::Implies:
        // right associative
        wrap(f.lhs(), prec(f.lhs().kind()) <= 1);
        out += " -> ";
        wrap(f.rhs(), prec(f.rhs().kind()) < 1);
        return;
    case Kind::Cond:
        wrap(f.lhs(), prec(f.lhs().kind()) <= 0);
        out += " |~ ";
        wrap(f.rhs(), prec(f.rhs().kind()) <= 0);
        return;
    }
}

void atoms_rec(Formula f, std::set<std::string>& out) {
    if (f.is_atom()) {
        out.insert(f.name());
        return;
    }
    if (f.lhs().valid()) atoms_rec(f.lhs(), out);
    if (f.rhs().valid()) atoms_rec(f.rhs(), out);
}

}  // namespace

std::string to_string(Formula f) {
    std::string out;
    print(f, out);
    return out;
}

std::vector<std::string> sorted_strings(const FormulaSet& s) {
    std::vector<std::string> v;
    v.reserve(s.size());
    for (Formula f : s) v.push_back(to_string(f));
    std::sort(v.begin(), v.end());
    return v;
}

std::string to_string(const FormulaSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& str : sorted_strings(s)) {
        if (!first) out += ", ";
        out += str;
        first = false;
    }
    return out + "}";
}

std::set<std::string> atoms_of(Formula f) {
    std::set<std::string> out;
    atoms_rec(f, out);
    return out;
}

std::set<std::string> atoms_of(const FormulaSet& s) {
    std::set<std::string> out;
    for (Formula f : s) atoms_rec(f, out);
    return out;
}

void collect_subformulas(Formula f, FormulaSet& out) {
    if (!out.insert(f).second) return;
    if (f.is_atom()) return;
    collect_subformulas(f.lhs(), out);
    if (f.rhs().valid()) collect_subformulas(f.rhs(), out);
}

int total_size(const FormulaSet& s) {
    int n = 0;
    for (Formula f : s) n += f.size();
    return n;
}

int total_cp(const FormulaSet& s) {
    int n = 0;
    for (Formula f : s) n += f.cp();
    return n;
}

}  // namespace klm
