#pragma once

// Directional lambda terms: the two applications and abstractions, the four
// unary connective markers, the ladder marker c^n left behind by structural
// moves, and a formal conjunction. Substitution, normalization and
// alpha-equivalence live here too.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "formula.hpp"

namespace lambek {

enum class TKind { Var, Const, AppR, AppL, LamR, LamL, Vee, Wedge, Cup, Cap, Comm, And };

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
    TKind kind;
    std::string name; // Var, Const, binder of LamR/LamL
    FormulaP annot;   // optional binder type; ignored by alpha-equivalence
    TermP a, b;       // children; see the factory functions for roles
    int comms = 0;    // Comm only, >= 1
};

namespace detail {
inline std::shared_ptr<Term> tNew(TKind k) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    return t;
}
} // namespace detail

inline TermP tVar(std::string name) {
    auto t = detail::tNew(TKind::Var);
    t->name = std::move(name);
    return t;
}

inline TermP tConst(std::string name) {
    auto t = detail::tNew(TKind::Const);
    t->name = std::move(name);
    return t;
}

// forward application t <| u, function on the left
inline TermP tAppR(TermP fn, TermP arg) {
    auto t = detail::tNew(TKind::AppR);
    t->a = std::move(fn);
    t->b = std::move(arg);
    return t;
}

// backward application u |> t, function on the right
inline TermP tAppL(TermP arg, TermP fn) {
    auto t = detail::tNew(TKind::AppL);
    t->a = std::move(arg);
    t->b = std::move(fn);
    return t;
}

inline TermP tLamR(std::string x, FormulaP annot, TermP body) {
    auto t = detail::tNew(TKind::LamR);
    t->name = std::move(x);
    t->annot = std::move(annot);
    t->a = std::move(body);
    return t;
}

inline TermP tLamL(std::string x, FormulaP annot, TermP body) {
    auto t = detail::tNew(TKind::LamL);
    t->name = std::move(x);
    t->annot = std::move(annot);
    t->a = std::move(body);
    return t;
}

inline TermP tUnary(TKind k, TermP body) {
    auto t = detail::tNew(k);
    t->a = std::move(body);
    return t;
}

inline TermP tVee(TermP body) { return tUnary(TKind::Vee, std::move(body)); }
inline TermP tWedge(TermP body) { return tUnary(TKind::Wedge, std::move(body)); }
inline TermP tCup(TermP body) { return tUnary(TKind::Cup, std::move(body)); }
inline TermP tCap(TermP body) { return tUnary(TKind::Cap, std::move(body)); }

inline TermP tComm(TermP body, int n) {
    if (n < 1) throw LambekError("tComm: ladder count must be >= 1");
    auto t = detail::tNew(TKind::Comm);
    t->a = std::move(body);
    t->comms = n;
    return t;
}

inline TermP tAnd(TermP l, TermP r) {
    auto t = detail::tNew(TKind::And);
    t->a = std::move(l);
    t->b = std::move(r);
    return t;
}

// ---- variables and substitution ---------------------------------------------

inline void free_vars(const TermP& t, std::set<std::string>& out) {
    switch (t->kind) {
        case TKind::Var: out.insert(t->name); break;
        case TKind::Const: break;
        case TKind::LamR:
        case TKind::LamL: {
            std::set<std::string> inner;
            free_vars(t->a, inner);
            inner.erase(t->name);
            out.insert(inner.begin(), inner.end());
            break;
        }
        default:
            if (t->a) free_vars(t->a, out);
            if (t->b) free_vars(t->b, out);
    }
}

inline std::set<std::string> free_vars(const TermP& t) {
    std::set<std::string> out;
    free_vars(t, out);
    return out;
}

inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
    while (avoid.count(base)) base += "'";
    return base;
}

// rename the binder of a lambda node so substitution cannot capture
inline TermP subst(const TermP& t, const std::string& x, const TermP& u);

namespace detail {
inline TermP rebuild(const TermP& t, TermP a, TermP b) {
    auto r = std::make_shared<Term>(*t);
    r->a = std::move(a);
    r->b = std::move(b);
    return r;
}
} // namespace detail

inline TermP subst(const TermP& t, const std::string& x, const TermP& u) {
    switch (t->kind) {
        case TKind::Var: return t->name == x ? u : t;
        case TKind::Const: return t;
        case TKind::LamR:
        case TKind::LamL: {
            if (t->name == x) return t; // shadowed
            std::set<std::string> fv = free_vars(t->a);
            if (!fv.count(x)) return t;
            std::set<std::string> fvu = free_vars(u);
            if (fvu.count(t->name)) {
                fvu.insert(fv.begin(), fv.end());
                std::string y = fresh_name(t->name, fvu);
                TermP body = subst(t->a, t->name, tVar(y));
                auto r = std::make_shared<Term>(*t);
                r->name = y;
                r->a = subst(body, x, u);
                return r;
            }
            auto r = std::make_shared<Term>(*t);
            r->a = subst(t->a, x, u);
            return r;
        }
        default: {
            TermP a = t->a ? subst(t->a, x, u) : nullptr;
            TermP b = t->b ? subst(t->b, x, u) : nullptr;
            if (a == t->a && b == t->b) return t;
            return detail::rebuild(t, std::move(a), std::move(b));
        }
    }
}

// ---- normalization -----------------------------------------------------------
//
// Reductions, applied innermost to a fixpoint:
//   (lamr x. t) <| u   -->  t[x := u]
//   u |> (laml x. t)   -->  t[x := u]
//   cup (cap t)        -->  t
//   vee (wedge t)      -->  t
//   comm^a (comm^b t)  -->  comm^(a+b) t

inline TermP normalize(const TermP& t) {
    switch (t->kind) {
        case TKind::Var:
        case TKind::Const: return t;
        case TKind::AppR: {
            TermP fn = normalize(t->a), arg = normalize(t->b);
            if (fn->kind == TKind::LamR) return normalize(subst(fn->a, fn->name, arg));
            return detail::rebuild(t, std::move(fn), std::move(arg));
        }
        case TKind::AppL: {
            TermP arg = normalize(t->a), fn = normalize(t->b);
            if (fn->kind == TKind::LamL) return normalize(subst(fn->a, fn->name, arg));
            return detail::rebuild(t, std::move(arg), std::move(fn));
        }
        case TKind::Cup: {
            TermP body = normalize(t->a);
            if (body->kind == TKind::Cap) return body->a;
            return detail::rebuild(t, std::move(body), nullptr);
        }
        case TKind::Vee: {
            TermP body = normalize(t->a);
            if (body->kind == TKind::Wedge) return body->a;
            return detail::rebuild(t, std::move(body), nullptr);
        }
        case TKind::Comm: {
            TermP body = normalize(t->a);
            if (body->kind == TKind::Comm) return tComm(body->a, t->comms + body->comms);
            return detail::rebuild(t, std::move(body), nullptr);
        }
        default: {
            TermP a = t->a ? normalize(t->a) : nullptr;
            TermP b = t->b ? normalize(t->b) : nullptr;
            if (a == t->a && b == t->b) return t;
            return detail::rebuild(t, std::move(a), std::move(b));
        }
    }
}

// drop every ladder marker, keeping the underlying term
inline TermP strip_comms(const TermP& t) {
    if (t->kind == TKind::Comm) return strip_comms(t->a);
    TermP a = t->a ? strip_comms(t->a) : nullptr;
    TermP b = t->b ? strip_comms(t->b) : nullptr;
    if (a == t->a && b == t->b) return t;
    return detail::rebuild(t, std::move(a), std::move(b));
}

// ---- alpha equivalence --------------------------------------------------------

namespace detail {

inline bool alpha_eq_at(const TermP& x, const TermP& y, std::map<std::string, int>& mx,
                        std::map<std::string, int>& my, int& next) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case TKind::Var: {
            auto ix = mx.find(x->name);
            auto iy = my.find(y->name);
            if ((ix != mx.end()) != (iy != my.end())) return false;
            if (ix != mx.end()) return ix->second == iy->second;
            return x->name == y->name;
        }
        case TKind::Const: return x->name == y->name;
        case TKind::LamR:
        case TKind::LamL: {
            // binder annotations are deliberately not compared
            int id = next++;
            auto ox = mx.find(x->name) != mx.end() ? std::optional<int>(mx[x->name]) : std::nullopt;
            auto oy = my.find(y->name) != my.end() ? std::optional<int>(my[y->name]) : std::nullopt;
            mx[x->name] = id;
            my[y->name] = id;
            bool ok = alpha_eq_at(x->a, y->a, mx, my, next);
            if (ox) mx[x->name] = *ox; else mx.erase(x->name);
            if (oy) my[y->name] = *oy; else my.erase(y->name);
            return ok;
        }
        case TKind::Comm:
            if (x->comms != y->comms) return false;
            return alpha_eq_at(x->a, y->a, mx, my, next);
        default: {
            if (static_cast<bool>(x->a) != static_cast<bool>(y->a)) return false;
            if (static_cast<bool>(x->b) != static_cast<bool>(y->b)) return false;
            if (x->a && !alpha_eq_at(x->a, y->a, mx, my, next)) return false;
            if (x->b && !alpha_eq_at(x->b, y->b, mx, my, next)) return false;
            return true;
        }
    }
}
} // namespace detail

inline bool alpha_equal(const TermP& x, const TermP& y) {
    std::map<std::string, int> mx, my;
    int next = 0;
    return detail::alpha_eq_at(x, y, mx, my, next);
}

// ---- printing -------------------------------------------------------------------

namespace detail {

inline std::string superscript_digits(int n) {
    static const char* digits[10] = {"⁰", "¹", "²", "³", "⁴",
                                     "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string out;
    for (char ch : std::to_string(n)) out += digits[ch - '0'];
    return out;
}

inline std::string print_term_rec(const TermP& t, bool unicode) {
    auto p = [&](const TermP& s) { return print_term_rec(s, unicode); };
    switch (t->kind) {
        case TKind::Var:
        case TKind::Const: return t->name;
        case TKind::AppR:
            return "(" + p(t->a) + (unicode ? " ◁ " : " <| ") + p(t->b) + ")";
        case TKind::AppL:
            return "(" + p(t->a) + (unicode ? " ▷ " : " |> ") + p(t->b) + ")";
        case TKind::LamR:
            return (unicode ? "λʳ" : "lamr ") + t->name + "." + p(t->a);
        case TKind::LamL:
            return (unicode ? "λˡ" : "laml ") + t->name + "." + p(t->a);
        case TKind::Vee: return unicode ? "∨" + p(t->a) : "vee(" + p(t->a) + ")";
        case TKind::Wedge: return unicode ? "∧" + p(t->a) : "wedge(" + p(t->a) + ")";
        case TKind::Cup: return unicode ? "∪" + p(t->a) : "cup(" + p(t->a) + ")";
        case TKind::Cap: return unicode ? "∩" + p(t->a) : "cap(" + p(t->a) + ")";
        case TKind::Comm:
            if (unicode)
                return "ᶜ" + (t->comms > 1 ? superscript_digits(t->comms) : "") + p(t->a);
            return "comm^" + std::to_string(t->comms) + "(" + p(t->a) + ")";
        case TKind::And:
            return "(" + p(t->a) + (unicode ? " ∧ " : " && ") + p(t->b) + ")";
    }
    throw LambekError("print_term: unreachable");
}

} // namespace detail

inline std::string print_term(const TermP& t) { return detail::print_term_rec(t, true); }
inline std::string print_term_ascii(const TermP& t) { return detail::print_term_rec(t, false); }

} // namespace lambek
