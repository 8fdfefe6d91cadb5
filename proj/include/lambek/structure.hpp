#pragma once

// Antecedent structures: typed leaves, the binary product (G . D) and the
// unary bracket <G>, plus sequents, paths into structures, and text forms.

#include <memory>
#include <string>
#include <vector>

#include "formula.hpp"

namespace lambek {

enum class SKind { Leaf, Prod, Brack };

struct Structure;
using StructureP = std::shared_ptr<const Structure>;

struct Structure {
    SKind kind;
    std::string var; // Leaf
    FormulaP type;   // Leaf
    StructureP l, r; // Prod
    StructureP inner; // Brack
};

inline StructureP sLeaf(std::string var, FormulaP type) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Leaf;
    s->var = std::move(var);
    s->type = std::move(type);
    return s;
}

inline StructureP sProd(StructureP l, StructureP r) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Prod;
    s->l = std::move(l);
    s->r = std::move(r);
    return s;
}

inline StructureP sBrack(StructureP inner) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Brack;
    s->inner = std::move(inner);
    return s;
}

inline bool equal(const StructureP& x, const StructureP& y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case SKind::Leaf: return x->var == y->var && equal(x->type, y->type);
        case SKind::Prod: return equal(x->l, y->l) && equal(x->r, y->r);
        default: return equal(x->inner, y->inner);
    }
}

struct Sequent {
    StructureP ante;
    FormulaP goal;
};

inline bool equal(const Sequent& x, const Sequent& y) {
    return equal(x.ante, y.ante) && equal(x.goal, y.goal);
}

// ---- traversal -------------------------------------------------------------

enum class Step { L, R, In };
using Path = std::vector<Step>;

inline const Structure* subtree_at(const StructureP& s, const Path& p) {
    const Structure* cur = s.get();
    for (Step st : p) {
        switch (st) {
            case Step::L:
                if (cur->kind != SKind::Prod) return nullptr;
                cur = cur->l.get();
                break;
            case Step::R:
                if (cur->kind != SKind::Prod) return nullptr;
                cur = cur->r.get();
                break;
            case Step::In:
                if (cur->kind != SKind::Brack) return nullptr;
                cur = cur->inner.get();
                break;
        }
    }
    return cur;
}

inline StructureP replace_at(const StructureP& s, const Path& p, const StructureP& sub, size_t depth = 0) {
    if (depth == p.size()) return sub;
    switch (p[depth]) {
        case Step::L: return sProd(replace_at(s->l, p, sub, depth + 1), s->r);
        case Step::R: return sProd(s->l, replace_at(s->r, p, sub, depth + 1));
        default: return sBrack(replace_at(s->inner, p, sub, depth + 1));
    }
}

// preorder list of every position, brackets included
inline void all_positions(const StructureP& s, std::vector<Path>& out, Path cur = {}) {
    out.push_back(cur);
    if (s->kind == SKind::Prod) {
        cur.push_back(Step::L);
        all_positions(s->l, out, cur);
        cur.back() = Step::R;
        all_positions(s->r, out, cur);
    } else if (s->kind == SKind::Brack) {
        cur.push_back(Step::In);
        all_positions(s->inner, out, cur);
    }
}

// preorder list of positions reachable through products only; these are the
// spots structural reasoning can move material to and from
inline void product_positions(const StructureP& s, std::vector<Path>& out, Path cur = {}) {
    out.push_back(cur);
    if (s->kind == SKind::Prod) {
        cur.push_back(Step::L);
        product_positions(s->l, out, cur);
        cur.back() = Step::R;
        product_positions(s->r, out, cur);
    }
}

inline void collect_leaves(const StructureP& s, std::vector<const Structure*>& out) {
    switch (s->kind) {
        case SKind::Leaf: out.push_back(s.get()); break;
        case SKind::Prod:
            collect_leaves(s->l, out);
            collect_leaves(s->r, out);
            break;
        default: collect_leaves(s->inner, out);
    }
}

inline std::vector<const Structure*> leaves(const StructureP& s) {
    std::vector<const Structure*> out;
    collect_leaves(s, out);
    return out;
}

inline bool has_leaf_var(const StructureP& s, const std::string& var) {
    for (const auto* leaf : leaves(s))
        if (leaf->var == var) return true;
    return false;
}

// every resource must occur exactly once
inline void check_linear(const StructureP& s) {
    auto ls = leaves(s);
    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
            if (ls[i]->var == ls[j]->var)
                throw NonLinearVariable("variable '" + ls[i]->var + "' occurs more than once");
}

// ---- printing --------------------------------------------------------------

inline std::string print_structure(const StructureP& s) {
    switch (s->kind) {
        case SKind::Leaf: return s->var + ":" + print_formula(s->type);
        case SKind::Prod: return "(" + print_structure(s->l) + " . " + print_structure(s->r) + ")";
        default: return "<" + print_structure(s->inner) + ">";
    }
}

inline std::string print_sequent(const Sequent& q) {
    return print_structure(q.ante) + " |- " + print_formula(q.goal);
}

// ---- parsing ---------------------------------------------------------------
//
//   structure := '<' structure '>' | '(' structure '.' structure ')' | var ':' formula
//
// A formula after ':' extends as far as the formula grammar allows; the
// tokens '.', ')' and a lone '>' cannot start or continue a formula, so the
// boundary is unambiguous.

namespace detail {

inline bool is_var_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
}

inline StructureP parse_structure_at(FormulaCursor& c) {
    c.skip_ws();
    if (c.i < c.s.size() && c.s[c.i] == '<' && !(c.i + 1 < c.s.size() && c.s[c.i + 1] == '>')) {
        ++c.i;
        StructureP inner = parse_structure_at(c);
        if (!c.try_take(">")) c.fail("expected '>'");
        return sBrack(inner);
    }
    if (c.try_take("(")) {
        StructureP l = parse_structure_at(c);
        if (!c.try_take(".")) c.fail("expected '.'");
        StructureP r = parse_structure_at(c);
        if (!c.try_take(")")) c.fail("expected ')'");
        return sProd(l, r);
    }
    size_t start = c.i;
    while (c.i < c.s.size() && is_var_char(c.s[c.i])) ++c.i;
    if (c.i == start) c.fail("expected a leaf, '(' or '<'");
    std::string var = c.s.substr(start, c.i - start);
    if (!c.try_take(":")) c.fail("expected ':' after leaf variable");
    // the leaf type runs up to a delimiter the formula grammar cannot consume
    FormulaP type = parse_formula_at(c);
    return sLeaf(std::move(var), std::move(type));
}

} // namespace detail

inline StructureP parse_structure(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw EmptyAntecedent("empty structure");
    detail::FormulaCursor c(text);
    StructureP s = detail::parse_structure_at(c);
    if (!c.at_end()) c.fail("trailing input");
    return s;
}

inline Sequent parse_sequent(const std::string& text) {
    size_t pos = text.find("|-");
    if (pos == std::string::npos) throw ParseError("sequent needs '|-': \"" + text + "\"");
    Sequent q;
    q.ante = parse_structure(text.substr(0, pos));
    q.goal = parse_formula(text.substr(pos + 2));
    return q;
}

} // namespace lambek
