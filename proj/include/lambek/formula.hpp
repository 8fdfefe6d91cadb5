#pragma once

// Types (formulas) of the modal Lambek calculus: atoms s, np, n, the two
// directional implications B/A and A\B, and the unary pair <>A, []A.
// Also the mapping from formulas to tensor signatures.

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lambek {

enum class Space { N, S, Spin };

inline const char* space_name(Space s) {
    switch (s) {
        case Space::N: return "N";
        case Space::S: return "S";
        default: return "Spin";
    }
}

// dimensions of the interpretation spaces; np and n share N
struct Dims {
    int n = 2;
    int s = 2;
    int spin = 2;

    int dim(Space sp) const {
        switch (sp) {
            case Space::N: return n;
            case Space::S: return s;
            default: return spin;
        }
    }
};

// one tensor factor: a space, covariant (ket-first) or its dual
struct Factor {
    Space space;
    bool dual = false;
};

inline bool operator==(const Factor& a, const Factor& b) {
    return a.space == b.space && a.dual == b.dual;
}

using Signature = std::vector<Factor>;

// dual of a compound signature: reverse the order, flip every factor
inline Signature dual_signature(Signature sig) {
    std::reverse(sig.begin(), sig.end());
    for (auto& f : sig) f.dual = !f.dual;
    return sig;
}

inline std::string signature_name(const Signature& sig) {
    std::string out;
    for (size_t i = 0; i < sig.size(); ++i) {
        if (i) out += " ";
        out += space_name(sig[i].space);
        if (sig[i].dual) out += "*";
    }
    return out;
}

enum class FKind { Atom, Over, Under, Dia, Box };

struct Formula;
using FormulaP = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    std::string atom; // Atom only
    FormulaP a, b;    // Over: a/b; Under: a\b; Dia, Box: a
};

inline Space atom_space(const std::string& name) {
    if (name == "s") return Space::S;
    if (name == "np" || name == "n") return Space::N;
    throw UnknownAtom("unknown atom '" + name + "' (expected s, np or n)");
}

inline FormulaP fAtom(const std::string& name) {
    atom_space(name); // reject unknown atoms at construction
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Atom;
    f->atom = name;
    return f;
}

inline FormulaP fOver(FormulaP result, FormulaP arg) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Over;
    f->a = std::move(result);
    f->b = std::move(arg);
    return f;
}

inline FormulaP fUnder(FormulaP arg, FormulaP result) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Under;
    f->a = std::move(arg);
    f->b = std::move(result);
    return f;
}

inline FormulaP fDia(FormulaP body) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Dia;
    f->a = std::move(body);
    return f;
}

inline FormulaP fBox(FormulaP body) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Box;
    f->a = std::move(body);
    return f;
}

inline bool equal(const FormulaP& x, const FormulaP& y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case FKind::Atom: return x->atom == y->atom;
        case FKind::Over:
        case FKind::Under: return equal(x->a, y->a) && equal(x->b, y->b);
        default: return equal(x->a, y->a);
    }
}

// ---- signatures ------------------------------------------------------------

// Tensor signature of a formula. With `with_spin` the unary connectives each
// contribute a Spin/Spin* pair; without it they are transparent, giving the
// signature the numeric data actually lives over.
inline Signature signature(const FormulaP& f, bool with_spin = true) {
    switch (f->kind) {
        case FKind::Atom: return {Factor{atom_space(f->atom), false}};
        case FKind::Over: {
            Signature sig = signature(f->a, with_spin);
            Signature arg = dual_signature(signature(f->b, with_spin));
            sig.insert(sig.end(), arg.begin(), arg.end());
            return sig;
        }
        case FKind::Under: {
            Signature sig = dual_signature(signature(f->a, with_spin));
            Signature res = signature(f->b, with_spin);
            sig.insert(sig.end(), res.begin(), res.end());
            return sig;
        }
        case FKind::Dia:
        case FKind::Box: {
            Signature sig = signature(f->a, with_spin);
            if (with_spin) {
                sig.push_back(Factor{Space::Spin, false});
                sig.push_back(Factor{Space::Spin, true});
            }
            return sig;
        }
    }
    throw LambekError("signature: unreachable");
}

inline Signature data_signature(const FormulaP& f) { return signature(f, false); }

// spatial signature plus the one Spin factor every word state carries
inline Signature full_signature(const FormulaP& f) {
    Signature sig = signature(f, true);
    sig.push_back(Factor{Space::Spin, false});
    return sig;
}

// ---- printing --------------------------------------------------------------

inline std::string print_formula(const FormulaP& f);

namespace detail {
inline bool is_binary(const FormulaP& f) { return f->kind == FKind::Over || f->kind == FKind::Under; }

inline std::string print_operand(const FormulaP& f) {
    if (is_binary(f)) return "(" + print_formula(f) + ")";
    return print_formula(f);
}
} // namespace detail

inline std::string print_formula(const FormulaP& f) {
    switch (f->kind) {
        case FKind::Atom: return f->atom;
        case FKind::Over: return detail::print_operand(f->a) + "/" + detail::print_operand(f->b);
        case FKind::Under: return detail::print_operand(f->a) + "\\" + detail::print_operand(f->b);
        case FKind::Dia: return "<>" + detail::print_operand(f->a);
        case FKind::Box: return "[]" + detail::print_operand(f->a);
    }
    throw LambekError("print_formula: unreachable");
}

// ---- parsing ---------------------------------------------------------------
//
//   formula := unary (('/' | '\') unary)*        left associative
//   unary   := ('<>' | '[]')* primary
//   primary := atom | '(' formula ')'

namespace detail {

struct FormulaCursor {
    const std::string& s;
    size_t i = 0;

    explicit FormulaCursor(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    }

    bool at_end() {
        skip_ws();
        return i >= s.size();
    }

    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    bool try_take(const char* tok) {
        skip_ws();
        size_t len = std::string(tok).size();
        if (s.compare(i, len, tok) == 0) {
            i += len;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("formula parse error at position " + std::to_string(i) + ": " + what +
                         " in \"" + s + "\"");
    }
};

inline FormulaP parse_formula_at(FormulaCursor& c);

inline FormulaP parse_primary(FormulaCursor& c) {
    if (c.try_take("(")) {
        FormulaP f = parse_formula_at(c);
        if (!c.try_take(")")) c.fail("expected ')'");
        return f;
    }
    c.skip_ws();
    size_t start = c.i;
    while (c.i < c.s.size() && std::isalpha(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    if (c.i == start) c.fail("expected an atom or '('");
    return fAtom(c.s.substr(start, c.i - start));
}

inline FormulaP parse_unary(FormulaCursor& c) {
    if (c.try_take("<>")) return fDia(parse_unary(c));
    if (c.try_take("[]")) return fBox(parse_unary(c));
    return parse_primary(c);
}

inline FormulaP parse_formula_at(FormulaCursor& c) {
    FormulaP left = parse_unary(c);
    for (;;) {
        if (c.try_take("/"))
            left = fOver(left, parse_unary(c));
        else if (c.peek() == '\\') {
            ++c.i;
            left = fUnder(left, parse_unary(c));
        } else
            return left;
    }
}

} // namespace detail

inline FormulaP parse_formula(const std::string& text) {
    detail::FormulaCursor c(text);
    FormulaP f = detail::parse_formula_at(c);
    if (!c.at_end()) c.fail("trailing input");
    return f;
}

} // namespace lambek
