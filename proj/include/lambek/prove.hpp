#pragma once

// Backward-chaining proof search for the bracketed calculus, plus extraction
// of directional lambda terms and expansion of the compiled hypothetical rule
// into its primitive structural moves.

#include <set>
#include <string>
#include <vector>

#include "derivation.hpp"
#include "term.hpp"

namespace lambek {

struct SearchLimits {
    int max_comms = 0;       // structural budget: total commutation cost per derivation
    int max_depth = 64;      // recursion guard
    int max_derivations = 64;
};

struct SearchResult {
    std::vector<DerivP> derivations;
    bool truncated = false; // some branch was cut by a limit
};

inline int total_comms(const DerivP& d) {
    int n = 0;
    if (d->rule == Rule::XLeft) n = d->comms;
    if (d->rule == Rule::CommDia) n = 1;
    for (const auto& p : d->premises) n += total_comms(p);
    return n;
}

namespace detail {

struct Prover {
    SearchLimits lim;
    bool truncated = false;
    std::set<std::string> used_names;
    int fresh_counter = 0;

    std::string fresh_hyp() {
        for (;;) {
            std::string name = "h" + std::to_string(fresh_counter++);
            if (used_names.insert(name).second) return name;
        }
    }

    bool push(std::vector<DerivP>& out, DerivP d) {
        if (static_cast<int>(out.size()) >= lim.max_derivations) {
            truncated = true;
            return false;
        }
        out.push_back(std::move(d));
        return true;
    }

    // all ways to read a functor type off a structure by eliminations only;
    // pairs each reachable type with its derivation
    std::vector<std::pair<FormulaP, DerivP>> spine(const StructureP& s, int depth) {
        std::vector<std::pair<FormulaP, DerivP>> out;
        if (depth > lim.max_depth) {
            truncated = true;
            return out;
        }
        switch (s->kind) {
            case SKind::Leaf:
                out.emplace_back(s->type, dNode(Rule::Ax, Sequent{s, s->type}, {}));
                break;
            case SKind::Prod: {
                for (auto& [f, dl] : spine(s->l, depth + 1)) {
                    if (f->kind != FKind::Over) continue;
                    for (auto& da : seq(s->r, f->b, depth + 1))
                        out.emplace_back(f->a, dNode(Rule::ER, Sequent{s, f->a}, {dl, da}));
                }
                for (auto& [f, dr] : spine(s->r, depth + 1)) {
                    if (f->kind != FKind::Under) continue;
                    for (auto& da : seq(s->l, f->a, depth + 1))
                        out.emplace_back(f->b, dNode(Rule::EL, Sequent{s, f->b}, {da, dr}));
                }
                break;
            }
            case SKind::Brack: {
                for (auto& [f, dg] : spine(s->inner, depth + 1)) {
                    if (f->kind != FKind::Box) continue;
                    out.emplace_back(f->a, dNode(Rule::EBox, Sequent{s, f->a}, {dg}));
                }
                break;
            }
        }
        return out;
    }

    std::vector<DerivP> seq(const StructureP& ante, const FormulaP& goal, int depth) {
        std::vector<DerivP> out;
        if (depth > lim.max_depth) {
            truncated = true;
            return out;
        }
        switch (goal->kind) {
            case FKind::Over: {
                std::string x = fresh_hyp();
                StructureP prem = sProd(ante, sLeaf(x, goal->b));
                for (auto& d : seq(prem, goal->a, depth + 1))
                    if (!push(out, dNode(Rule::IR, Sequent{ante, goal}, {d}))) break;
                return out;
            }
            case FKind::Under: {
                if (goal->a->kind == FKind::Dia && goal->a->a->kind == FKind::Box) {
                    // hypothetical rule: try every product position, cheapest first
                    FormulaP hyp_type = goal->a->a->a;
                    std::vector<Path> ps;
                    product_positions(ante, ps);
                    std::vector<std::pair<int, Path>> ranked;
                    for (auto& p : ps) ranked.emplace_back(r_steps(p), p);
                    std::stable_sort(ranked.begin(), ranked.end(),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
                    for (auto& [n, path] : ranked) {
                        if (n > lim.max_comms) {
                            truncated = true;
                            continue;
                        }
                        const Structure* sub = subtree_at(ante, path);
                        std::string y = fresh_hyp();
                        StructureP with_hyp = replace_at(
                            ante, path,
                            sProd(sLeaf(y, hyp_type),
                                  std::make_shared<const Structure>(*sub)));
                        bool full = false;
                        for (auto& d : seq(with_hyp, goal->b, depth + 1))
                            if (!push(out, dNode(Rule::XLeft, Sequent{ante, goal}, {d}, n))) {
                                full = true;
                                break;
                            }
                        if (full) break;
                    }
                    return out;
                }
                std::string x = fresh_hyp();
                StructureP prem = sProd(sLeaf(x, goal->a), ante);
                for (auto& d : seq(prem, goal->b, depth + 1))
                    if (!push(out, dNode(Rule::IL, Sequent{ante, goal}, {d}))) break;
                return out;
            }
            case FKind::Box: {
                StructureP prem = sBrack(ante);
                for (auto& d : seq(prem, goal->a, depth + 1))
                    if (!push(out, dNode(Rule::IBox, Sequent{ante, goal}, {d}))) break;
                return out;
            }
            case FKind::Dia:
            case FKind::Atom:
                break;
        }

        // forced step: unpack the leftmost diamond-typed leaf before anything else
        {
            std::vector<Path> ps;
            all_positions(ante, ps);
            for (const auto& path : ps) {
                const Structure* sub = subtree_at(ante, path);
                if (sub->kind != SKind::Leaf || sub->type->kind != FKind::Dia) continue;
                StructureP leaf = std::make_shared<const Structure>(*sub);
                std::string z = fresh_hyp();
                StructureP hyp = sBrack(sLeaf(z, sub->type->a));
                StructureP major_ante = replace_at(ante, path, hyp);
                DerivP minor = dNode(Rule::Ax, Sequent{leaf, sub->type}, {});
                for (auto& d : seq(major_ante, goal, depth + 1))
                    if (!push(out, dNode(Rule::EDia, Sequent{ante, goal}, {minor, d}))) break;
                return out;
            }
        }

        if (goal->kind == FKind::Dia && ante->kind == SKind::Brack) {
            for (auto& d : seq(ante->inner, goal->a, depth + 1))
                if (!push(out, dNode(Rule::IDia, Sequent{ante, goal}, {d}))) return out;
        }
        for (auto& [f, d] : spine(ante, depth)) {
            if (!equal(f, goal)) continue;
            if (!push(out, d)) return out;
        }
        return out;
    }
};

} // namespace detail

inline SearchResult prove(const Sequent& s, const SearchLimits& lim = {}) {
    check_linear(s.ante);
    detail::Prover pr;
    pr.lim = lim;
    for (const auto* leaf : leaves(s.ante)) pr.used_names.insert(leaf->var);
    std::vector<DerivP> found = pr.seq(s.ante, s.goal, 0);
    SearchResult res;
    res.truncated = pr.truncated;
    for (auto& d : found) {
        if (total_comms(d) > lim.max_comms) {
            res.truncated = true;
            continue;
        }
        bool dup = false;
        for (const auto& prev : res.derivations)
            if (deriv_equal(prev, d)) {
                dup = true;
                break;
            }
        if (!dup) res.derivations.push_back(std::move(d));
    }
    return res;
}

// ---- term extraction --------------------------------------------------------

namespace detail {

// binder introduced by an IR/IL premise: the one extra leaf on the stated side
inline const Structure* intro_hyp(const Derivation& d, bool left) {
    const StructureP& pa = d.premises[0]->seq.ante;
    if (pa->kind != SKind::Prod) throw InvalidInference(rule_tag(d) + ": premise antecedent is not a product");
    const StructureP& leaf = left ? pa->l : pa->r;
    if (leaf->kind != SKind::Leaf) throw InvalidInference(rule_tag(d) + ": hypothesis is not a leaf");
    return leaf.get();
}

// variable consumed by a substitution rule: diff premise against conclusion
inline std::string edia_hyp(const Derivation& d) {
    const StructureP& major = d.premises[1]->seq.ante;
    const Sequent& minor = d.premises[0]->seq;
    std::vector<Path> ps;
    all_positions(major, ps);
    for (const auto& path : ps) {
        const Structure* sub = subtree_at(major, path);
        if (!sub || sub->kind != SKind::Brack || sub->inner->kind != SKind::Leaf) continue;
        if (!equal(sub->inner->type, minor.goal->a)) continue;
        if (!equal(replace_at(major, path, minor.ante), d.seq.ante)) continue;
        return sub->inner->var;
    }
    throw InvalidInference(rule_tag(d) + ": cannot locate the consumed hypothesis");
}

inline std::string xleft_hyp(const Derivation& d) {
    const StructureP& pa = d.premises[0]->seq.ante;
    FormulaP hyp_type = d.seq.goal->a->a->a;
    std::vector<Path> ps;
    product_positions(pa, ps);
    for (const auto& path : ps) {
        const Structure* sub = subtree_at(pa, path);
        if (!sub || sub->kind != SKind::Prod || sub->l->kind != SKind::Leaf) continue;
        if (!equal(sub->l->type, hyp_type)) continue;
        if (!equal(replace_at(pa, path, sub->r), d.seq.ante)) continue;
        if (r_steps(path) != d.comms) continue;
        return sub->l->var;
    }
    throw InvalidInference(rule_tag(d) + ": cannot locate the hypothesis");
}

inline TermP add_comms(const TermP& t, int n) {
    if (n <= 0) return t;
    if (t->kind == TKind::Comm) return tComm(t->a, t->comms + n);
    return tComm(t, n);
}

} // namespace detail

inline TermP extract_term(const DerivP& d) {
    switch (d->rule) {
        case Rule::Ax:
            return tVar(d->seq.ante->var);
        case Rule::ER:
            return tAppR(extract_term(d->premises[0]), extract_term(d->premises[1]));
        case Rule::EL:
            return tAppL(extract_term(d->premises[0]), extract_term(d->premises[1]));
        case Rule::IR: {
            const Structure* hyp = detail::intro_hyp(*d, false);
            return tLamR(hyp->var, d->seq.goal->b, extract_term(d->premises[0]));
        }
        case Rule::IL: {
            const Structure* hyp = detail::intro_hyp(*d, true);
            return tLamL(hyp->var, d->seq.goal->a, extract_term(d->premises[0]));
        }
        case Rule::IBox:
            return tWedge(extract_term(d->premises[0]));
        case Rule::EBox:
            return tVee(extract_term(d->premises[0]));
        case Rule::IDia:
            return tCap(extract_term(d->premises[0]));
        case Rule::EDia: {
            std::string z = detail::edia_hyp(*d);
            TermP body = extract_term(d->premises[1]);
            return subst(body, z, tCup(extract_term(d->premises[0])));
        }
        case Rule::AssDia:
            return extract_term(d->premises[0]);
        case Rule::CommDia:
            return detail::add_comms(extract_term(d->premises[0]), 1);
        case Rule::XLeft: {
            std::string y = detail::xleft_hyp(*d);
            TermP body = extract_term(d->premises[0]);
            body = subst(body, y, tVee(tCup(tVar(y))));
            body = detail::add_comms(body, d->comms);
            return tLamL(y, d->seq.goal->a, body);
        }
    }
    throw LambekError("extract_term: unreachable");
}

// ---- expansion of the compiled rule ------------------------------------------

namespace detail {

inline void collect_leaf_vars(const StructureP& s, std::set<std::string>& out) {
    for (const auto* leaf : leaves(s)) out.insert(leaf->var);
}

inline void collect_deriv_vars(const DerivP& d, std::set<std::string>& out) {
    collect_leaf_vars(d->seq.ante, out);
    for (const auto& p : d->premises) collect_deriv_vars(p, out);
}

// rewrites a subderivation, replacing the plain hypothesis y:A with the
// bracketed boxed one <y':[]A> unlocked by EBox at each axiom
inline DerivP rebox_hyp(const DerivP& d, const std::string& y, const std::string& y2,
                        const FormulaP& hyp_type) {
    StructureP boxed = sBrack(sLeaf(y2, fBox(hyp_type)));
    if (d->rule == Rule::Ax && d->seq.ante->kind == SKind::Leaf && d->seq.ante->var == y) {
        DerivP ax = dNode(Rule::Ax, Sequent{sLeaf(y2, fBox(hyp_type)), fBox(hyp_type)}, {});
        return dNode(Rule::EBox, Sequent{boxed, hyp_type}, {ax});
    }
    auto rewrite = [&](const StructureP& s, auto&& self) -> StructureP {
        switch (s->kind) {
            case SKind::Leaf:
                return s->var == y ? boxed : s;
            case SKind::Prod:
                return sProd(self(s->l, self), self(s->r, self));
            case SKind::Brack:
                return sBrack(self(s->inner, self));
        }
        throw LambekError("rebox_hyp: unreachable");
    };
    std::vector<DerivP> premises;
    for (const auto& p : d->premises) premises.push_back(rebox_hyp(p, y, y2, hyp_type));
    return dNode(d->rule, Sequent{rewrite(d->seq.ante, rewrite), d->seq.goal}, std::move(premises),
                 d->comms);
}

// finds the product path leading to the (unique) leaf named y; In steps banned
inline bool path_to_leaf(const StructureP& s, const std::string& y, Path& out) {
    switch (s->kind) {
        case SKind::Leaf:
            return s->var == y;
        case SKind::Prod:
            out.push_back(Step::L);
            if (path_to_leaf(s->l, y, out)) return true;
            out.back() = Step::R;
            if (path_to_leaf(s->r, y, out)) return true;
            out.pop_back();
            return false;
        case SKind::Brack:
            out.push_back(Step::In);
            if (path_to_leaf(s->inner, y, out)) return true;
            out.pop_back();
            return false;
    }
    return false;
}

} // namespace detail

// Rewrites one XLeft node into the primitive sequence it compiles: hypothesize
// <y':[]A>, hoist it leftward with associativity/commutativity moves, discharge
// with EDia against a fresh diamond axiom, then introduce the slash.
// Premise nodes below are rewritten recursively first.
inline DerivP expand_xleft(const DerivP& d) {
    std::vector<DerivP> premises;
    for (const auto& p : d->premises) premises.push_back(expand_xleft(p));
    if (d->rule != Rule::XLeft)
        return dNode(d->rule, d->seq, std::move(premises), d->comms);

    FormulaP hyp_type = d->seq.goal->a->a->a;      // A  in  <>[]A\B
    FormulaP boxed = fBox(hyp_type);               // []A
    FormulaP packed = d->seq.goal->a;              // <>[]A
    std::string y = detail::xleft_hyp(*d);

    std::set<std::string> used;
    detail::collect_deriv_vars(d, used);
    std::string y2 = fresh_name(y, used);
    used.insert(y2);
    std::string x = fresh_name("x", used);

    DerivP cur = detail::rebox_hyp(premises[0], y, y2, hyp_type);

    // hoist <y':[]A> to the far left: the bracket always sits as the left
    // child of a product; the grandparent side picks the move
    for (;;) {
        Path q;
        if (!detail::path_to_leaf(cur->seq.ante, y2, q))
            throw LambekError("expand_xleft: lost hypothesis");
        if (q.empty() || q.back() != Step::In) throw LambekError("expand_xleft: hypothesis not bracketed");
        q.pop_back(); // q now addresses the bracket, ending in L throughout
        if (q.empty() || q.back() != Step::L) throw LambekError("expand_xleft: hoisting failed");
        if (q.size() == 1) break;
        Step side = q[q.size() - 2];
        q.resize(q.size() - 2); // the rewrite position
        const Structure* at = subtree_at(cur->seq.ante, q);
        StructureP moved;
        Rule rule;
        if (side == Step::L) {
            // (<D1> . D2) . D3  =>  <D1> . (D2 . D3)
            moved = sProd(at->l->l, sProd(at->l->r, at->r));
            rule = Rule::AssDia;
        } else {
            // D2 . (<D1> . D3)  =>  <D1> . (D2 . D3)
            moved = sProd(at->r->l, sProd(at->l, at->r->r));
            rule = Rule::CommDia;
        }
        StructureP next = replace_at(cur->seq.ante, q, moved);
        cur = dNode(rule, Sequent{next, cur->seq.goal}, {cur});
    }

    // discharge: replace <y':[]A> by x:<>[]A via EDia against an axiom
    if (cur->seq.ante->kind != SKind::Prod) throw LambekError("expand_xleft: hoisting failed");
    DerivP minor = dNode(Rule::Ax, Sequent{sLeaf(x, packed), packed}, {});
    StructureP after = sProd(sLeaf(x, packed), cur->seq.ante->r);
    cur = dNode(Rule::EDia, Sequent{after, cur->seq.goal}, {minor, cur});

    // introduce the slash to land on the original conclusion
    return dNode(Rule::IL, d->seq, {cur});
}

} // namespace lambek
