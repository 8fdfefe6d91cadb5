#pragma once

// Natural-deduction derivations: rule tags, validity checking, and the two
// on-disk forms (indented text and JSON).

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "structure.hpp"

namespace lambek {

enum class Rule { Ax, ER, EL, IR, IL, EBox, IBox, EDia, IDia, AssDia, CommDia, XLeft };

struct Derivation;
using DerivP = std::shared_ptr<const Derivation>;

struct Derivation {
    Rule rule;
    int comms = 0; // XLeft only: structural cost of the hypothesis position
    Sequent seq;
    std::vector<DerivP> premises;
};

inline DerivP dNode(Rule r, Sequent seq, std::vector<DerivP> premises, int comms = 0) {
    auto d = std::make_shared<Derivation>();
    d->rule = r;
    d->comms = comms;
    d->seq = std::move(seq);
    d->premises = std::move(premises);
    return d;
}

inline std::string rule_tag(const Derivation& d) {
    switch (d.rule) {
        case Rule::Ax: return "Ax";
        case Rule::ER: return "ER";
        case Rule::EL: return "EL";
        case Rule::IR: return "IR";
        case Rule::IL: return "IL";
        case Rule::EBox: return "EBox";
        case Rule::IBox: return "IBox";
        case Rule::EDia: return "EDia";
        case Rule::IDia: return "IDia";
        case Rule::AssDia: return "AssDia";
        case Rule::CommDia: return "CommDia";
        case Rule::XLeft: return "XLeft(" + std::to_string(d.comms) + ")";
    }
    throw LambekError("rule_tag: unreachable");
}

inline bool deriv_equal(const DerivP& x, const DerivP& y) {
    if (x == y) return true;
    if (!x || !y || x->rule != y->rule || x->comms != y->comms) return false;
    if (!equal(x->seq, y->seq) || x->premises.size() != y->premises.size()) return false;
    for (size_t i = 0; i < x->premises.size(); ++i)
        if (!deriv_equal(x->premises[i], y->premises[i])) return false;
    return true;
}

// ---- checking ---------------------------------------------------------------

namespace detail {

[[noreturn]] inline void bad(const Derivation& d, const std::string& why) {
    throw InvalidInference(rule_tag(d) + " at \"" + print_sequent(d.seq) + "\": " + why);
}

inline void expect_premises(const Derivation& d, size_t n) {
    if (d.premises.size() != n)
        bad(d, "expected " + std::to_string(n) + " premises, found " + std::to_string(d.premises.size()));
}

inline int r_steps(const Path& p) {
    int n = 0;
    for (Step s : p) {
        if (s == Step::In) return -1; // not a pure product path
        if (s == Step::R) ++n;
    }
    return n;
}

} // namespace detail

// validates one node against its premises; premises are assumed checked
inline void check_node(const Derivation& d) {
    using detail::bad;
    check_linear(d.seq.ante);
    switch (d.rule) {
        case Rule::Ax: {
            detail::expect_premises(d, 0);
            if (d.seq.ante->kind != SKind::Leaf) bad(d, "antecedent is not a single leaf");
            if (!equal(d.seq.ante->type, d.seq.goal)) bad(d, "leaf type differs from goal");
            return;
        }
        case Rule::ER: {
            detail::expect_premises(d, 2);
            const Sequent& fn = d.premises[0]->seq;
            const Sequent& arg = d.premises[1]->seq;
            if (fn.goal->kind != FKind::Over) bad(d, "first premise goal is not B/A");
            if (!equal(fn.goal->b, arg.goal)) bad(d, "argument type mismatch");
            if (!equal(d.seq.goal, fn.goal->a)) bad(d, "conclusion goal is not the result type");
            if (d.seq.ante->kind != SKind::Prod || !equal(d.seq.ante->l, fn.ante) ||
                !equal(d.seq.ante->r, arg.ante))
                bad(d, "antecedent is not (function . argument)");
            return;
        }
        case Rule::EL: {
            detail::expect_premises(d, 2);
            const Sequent& arg = d.premises[0]->seq;
            const Sequent& fn = d.premises[1]->seq;
            if (fn.goal->kind != FKind::Under) bad(d, "second premise goal is not A\\B");
            if (!equal(fn.goal->a, arg.goal)) bad(d, "argument type mismatch");
            if (!equal(d.seq.goal, fn.goal->b)) bad(d, "conclusion goal is not the result type");
            if (d.seq.ante->kind != SKind::Prod || !equal(d.seq.ante->l, arg.ante) ||
                !equal(d.seq.ante->r, fn.ante))
                bad(d, "antecedent is not (argument . function)");
            return;
        }
        case Rule::IR: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (d.seq.goal->kind != FKind::Over) bad(d, "goal is not B/A");
            if (!equal(p.goal, d.seq.goal->a)) bad(d, "premise goal is not the result type");
            if (p.ante->kind != SKind::Prod || p.ante->r->kind != SKind::Leaf ||
                !equal(p.ante->r->type, d.seq.goal->b) || !equal(p.ante->l, d.seq.ante))
                bad(d, "premise antecedent is not (conclusion . hypothesis)");
            if (has_leaf_var(d.seq.ante, p.ante->r->var)) bad(d, "hypothesis variable is not fresh");
            return;
        }
        case Rule::IL: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (d.seq.goal->kind != FKind::Under) bad(d, "goal is not A\\B");
            if (!equal(p.goal, d.seq.goal->b)) bad(d, "premise goal is not the result type");
            if (p.ante->kind != SKind::Prod || p.ante->l->kind != SKind::Leaf ||
                !equal(p.ante->l->type, d.seq.goal->a) || !equal(p.ante->r, d.seq.ante))
                bad(d, "premise antecedent is not (hypothesis . conclusion)");
            if (has_leaf_var(d.seq.ante, p.ante->l->var)) bad(d, "hypothesis variable is not fresh");
            return;
        }
        case Rule::IBox: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (d.seq.goal->kind != FKind::Box) bad(d, "goal is not []B");
            if (!equal(p.goal, d.seq.goal->a)) bad(d, "premise goal mismatch");
            if (p.ante->kind != SKind::Brack || !equal(p.ante->inner, d.seq.ante))
                bad(d, "premise antecedent is not <conclusion>");
            return;
        }
        case Rule::EBox: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (p.goal->kind != FKind::Box) bad(d, "premise goal is not []B");
            if (!equal(p.goal->a, d.seq.goal)) bad(d, "conclusion goal mismatch");
            if (d.seq.ante->kind != SKind::Brack || !equal(d.seq.ante->inner, p.ante))
                bad(d, "conclusion antecedent is not <premise>");
            return;
        }
        case Rule::IDia: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (d.seq.goal->kind != FKind::Dia) bad(d, "goal is not <>B");
            if (!equal(p.goal, d.seq.goal->a)) bad(d, "premise goal mismatch");
            if (d.seq.ante->kind != SKind::Brack || !equal(d.seq.ante->inner, p.ante))
                bad(d, "conclusion antecedent is not <premise>");
            return;
        }
        case Rule::EDia: {
            detail::expect_premises(d, 2);
            const Sequent& minor = d.premises[0]->seq;
            const Sequent& major = d.premises[1]->seq;
            if (minor.goal->kind != FKind::Dia) bad(d, "first premise goal is not <>A");
            if (!equal(major.goal, d.seq.goal)) bad(d, "goal changed");
            std::vector<Path> ps;
            all_positions(major.ante, ps);
            for (const auto& path : ps) {
                const Structure* sub = subtree_at(major.ante, path);
                if (!sub || sub->kind != SKind::Brack || sub->inner->kind != SKind::Leaf) continue;
                if (!equal(sub->inner->type, minor.goal->a)) continue;
                if (!equal(replace_at(major.ante, path, minor.ante), d.seq.ante)) continue;
                if (has_leaf_var(d.seq.ante, sub->inner->var)) continue;
                return;
            }
            bad(d, "no bracketed hypothesis matches the substitution");
        }
        case Rule::AssDia: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (!equal(p.goal, d.seq.goal)) bad(d, "goal changed");
            std::vector<Path> ps;
            all_positions(p.ante, ps);
            for (const auto& path : ps) {
                const Structure* sub = subtree_at(p.ante, path);
                if (!sub || sub->kind != SKind::Prod) continue;
                // (<D1> . D2) . D3  re-associates to  <D1> . (D2 . D3)
                if (sub->l->kind != SKind::Prod || sub->l->l->kind != SKind::Brack) continue;
                StructureP moved = sProd(sub->l->l, sProd(sub->l->r, sub->r));
                if (equal(replace_at(p.ante, path, moved), d.seq.ante)) return;
            }
            bad(d, "not an associativity move on a bracketed unit");
        }
        case Rule::CommDia: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (!equal(p.goal, d.seq.goal)) bad(d, "goal changed");
            std::vector<Path> ps;
            all_positions(p.ante, ps);
            for (const auto& path : ps) {
                const Structure* sub = subtree_at(p.ante, path);
                if (!sub || sub->kind != SKind::Prod) continue;
                // D2 . (<D1> . D3)  commutes to  <D1> . (D2 . D3)
                if (sub->r->kind != SKind::Prod || sub->r->l->kind != SKind::Brack) continue;
                StructureP moved = sProd(sub->r->l, sProd(sub->l, sub->r->r));
                if (equal(replace_at(p.ante, path, moved), d.seq.ante)) return;
            }
            bad(d, "not a commutativity move on a bracketed unit");
        }
        case Rule::XLeft: {
            detail::expect_premises(d, 1);
            const Sequent& p = d.premises[0]->seq;
            if (d.seq.goal->kind != FKind::Under || d.seq.goal->a->kind != FKind::Dia ||
                d.seq.goal->a->a->kind != FKind::Box)
                bad(d, "goal is not <>[]A\\B");
            FormulaP hyp_type = d.seq.goal->a->a->a;
            if (!equal(p.goal, d.seq.goal->b)) bad(d, "premise goal is not the result type");
            std::vector<Path> ps;
            product_positions(p.ante, ps);
            for (const auto& path : ps) {
                const Structure* sub = subtree_at(p.ante, path);
                if (!sub || sub->kind != SKind::Prod || sub->l->kind != SKind::Leaf) continue;
                if (!equal(sub->l->type, hyp_type)) continue;
                if (!equal(replace_at(p.ante, path, sub->r), d.seq.ante)) continue;
                if (has_leaf_var(d.seq.ante, sub->l->var)) continue;
                if (detail::r_steps(path) != d.comms) continue;
                return;
            }
            bad(d, "no hypothesis position matches a structural cost of " + std::to_string(d.comms));
        }
    }
    throw LambekError("check_node: unreachable");
}

inline void check(const DerivP& d) {
    for (const auto& p : d->premises) check(p);
    check_node(*d);
}

// ---- text form ---------------------------------------------------------------

inline void serialize_text_rec(const DerivP& d, int indent, std::string& out) {
    out.append(static_cast<size_t>(indent) * 2, ' ');
    out += rule_tag(*d);
    out += "  ";
    out += print_sequent(d->seq);
    out += "\n";
    for (const auto& p : d->premises) serialize_text_rec(p, indent + 1, out);
}

inline std::string serialize_text(const DerivP& d) {
    std::string out;
    serialize_text_rec(d, 0, out);
    return out;
}

namespace detail {

struct TextNode {
    int depth;
    Rule rule;
    int comms;
    Sequent seq;
};

inline std::pair<Rule, int> parse_rule_tag(const std::string& tag) {
    if (tag == "Ax") return {Rule::Ax, 0};
    if (tag == "ER") return {Rule::ER, 0};
    if (tag == "EL") return {Rule::EL, 0};
    if (tag == "IR") return {Rule::IR, 0};
    if (tag == "IL") return {Rule::IL, 0};
    if (tag == "EBox") return {Rule::EBox, 0};
    if (tag == "IBox") return {Rule::IBox, 0};
    if (tag == "EDia") return {Rule::EDia, 0};
    if (tag == "IDia") return {Rule::IDia, 0};
    if (tag == "AssDia") return {Rule::AssDia, 0};
    if (tag == "CommDia") return {Rule::CommDia, 0};
    if (tag.rfind("XLeft(", 0) == 0 && tag.back() == ')') {
        try {
            return {Rule::XLeft, std::stoi(tag.substr(6, tag.size() - 7))};
        } catch (const std::exception&) {
        }
    }
    throw ParseError("unknown rule tag '" + tag + "'");
}

// builds the subtree rooted at `pos` (which must have depth `depth`)
inline DerivP build_from_lines(const std::vector<TextNode>& nodes, size_t& pos, int depth) {
    if (pos >= nodes.size() || nodes[pos].depth != depth)
        throw ParseError("derivation text: bad indentation at line " + std::to_string(pos + 1));
    const TextNode& n = nodes[pos];
    ++pos;
    std::vector<DerivP> premises;
    while (pos < nodes.size() && nodes[pos].depth > depth) {
        if (nodes[pos].depth != depth + 1)
            throw ParseError("derivation text: bad indentation at line " + std::to_string(pos + 1));
        premises.push_back(build_from_lines(nodes, pos, depth + 1));
    }
    return dNode(n.rule, n.seq, std::move(premises), n.comms);
}

} // namespace detail

inline DerivP parse_derivation_text(const std::string& text) {
    std::vector<detail::TextNode> nodes;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            if (start > text.size()) break;
            continue;
        }
        size_t spaces = 0;
        while (spaces < line.size() && line[spaces] == ' ') ++spaces;
        if (spaces % 2 != 0) throw ParseError("derivation text: odd indentation");
        size_t tag_end = line.find("  ", spaces);
        if (tag_end == std::string::npos) throw ParseError("derivation text: missing sequent");
        auto [rule, comms] = detail::parse_rule_tag(line.substr(spaces, tag_end - spaces));
        Sequent seq = parse_sequent(line.substr(tag_end + 2));
        nodes.push_back(detail::TextNode{static_cast<int>(spaces / 2), rule, comms, std::move(seq)});
    }
    if (nodes.empty()) throw ParseError("derivation text: no nodes");
    size_t pos = 0;
    DerivP d = detail::build_from_lines(nodes, pos, 0);
    if (pos != nodes.size()) throw ParseError("derivation text: trailing lines");
    return d;
}

// ---- JSON form -----------------------------------------------------------------

inline nlohmann::ordered_json derivation_to_json(const DerivP& d) {
    nlohmann::ordered_json j;
    j["rule"] = rule_tag(*d).substr(0, rule_tag(*d).find('('));
    if (d->rule == Rule::XLeft) j["comms"] = d->comms;
    j["sequent"] = print_sequent(d->seq);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : d->premises) arr.push_back(derivation_to_json(p));
    j["premises"] = std::move(arr);
    return j;
}

inline DerivP derivation_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rule") || !j.contains("sequent"))
        throw ParseError("derivation json: node needs 'rule' and 'sequent'");
    std::string tag = j["rule"].get<std::string>();
    int comms = 0;
    if (j.contains("comms")) comms = j["comms"].get<int>();
    if (tag == "XLeft") tag += "(" + std::to_string(comms) + ")";
    auto [rule, parsed_comms] = detail::parse_rule_tag(tag);
    Sequent seq = parse_sequent(j["sequent"].get<std::string>());
    std::vector<DerivP> premises;
    if (j.contains("premises"))
        for (const auto& p : j["premises"]) premises.push_back(derivation_from_json(p));
    return dNode(rule, std::move(seq), std::move(premises), parsed_comms);
}

} // namespace lambek
