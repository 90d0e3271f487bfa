#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace klm {

enum class Kind : std::uint8_t { Atom, Neg, And, Or, Implies, Cond, BoxNeg, LMod };

struct FormulaNode;

// Hash-consed formula handle. Two handles are equal iff the formulas are
// structurally identical, so comparisons and set lookups are O(1)/O(log n).
class Formula {
public:
    Formula() = default;

    static Formula atom(std::string_view name);
    static Formula neg(Formula f);
    static Formula conj(Formula l, Formula r);
    static Formula disj(Formula l, Formula r);
    static Formula implies(Formula l, Formula r);
    static Formula cond(Formula ante, Formula cons);
    static Formula box_neg(Formula body);  // []~body
    static Formula lmod(Formula body);     // L body

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const std::string& name() const;  // atoms only
    Formula sub() const;              // operand of Neg, BoxNeg, LMod
    Formula lhs() const;              // binary connectives and Cond antecedent
    Formula rhs() const;              // binary connectives and Cond consequent
    std::uint32_t id() const;

    bool is_atom() const { return kind() == Kind::Atom; }
    bool is_neg() const { return kind() == Kind::Neg; }
    bool is_cond() const { return kind() == Kind::Cond; }
    bool is_box() const { return kind() == Kind::BoxNeg; }
    bool is_l() const { return kind() == Kind::LMod; }
    bool is_negated(Kind k) const { return is_neg() && sub().kind() == k; }
    bool is_literal() const { return is_atom() || is_negated(Kind::Atom); }

    // no Cond, BoxNeg or LMod anywhere inside
    bool is_propositional() const;
    bool has_cond() const;
    bool has_modal() const;  // BoxNeg or LMod inside
    int cp() const;
    int size() const;  // number of AST nodes

    friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
    friend std::strong_ordering operator<=>(Formula a, Formula b);

private:
    explicit Formula(const FormulaNode* n) : node_(n) {}
    static Formula make(Kind k, std::string_view name, Formula a, Formula b);
    const FormulaNode* node_ = nullptr;
};

struct FormulaHash {
    std::size_t operator()(Formula f) const { return f.id(); }
};

using FormulaSet = std::set<Formula>;

std::string to_string(Formula f);
std::string to_string(const FormulaSet& s);
// printed forms, sorted; used wherever output must be byte-stable
std::vector<std::string> sorted_strings(const FormulaSet& s);

std::set<std::string> atoms_of(Formula f);
std::set<std::string> atoms_of(const FormulaSet& s);
void collect_subformulas(Formula f, FormulaSet& out);

inline Formula operator!(Formula f) { return Formula::neg(f); }
inline Formula operator&(Formula l, Formula r) { return Formula::conj(l, r); }
inline Formula operator|(Formula l, Formula r) { return Formula::disj(l, r); }

int total_size(const FormulaSet& s);
int total_cp(const FormulaSet& s);

}  // namespace klm
