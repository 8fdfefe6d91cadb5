#pragma once

// End-to-end sentence analysis: tokenize, pick a bracketing, search for
// derivations, extract one term per reading, interpret, and report.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "interpret.hpp"
#include "prove.hpp"

namespace lambek {

struct PipelineOptions {
    FormulaP goal;                        // defaults to the sentence atom
    SearchLimits limits;
    EvalOptions eval;
    std::vector<double> reading_weights;  // empty: uniform
    std::string brackets;                 // optional explicit grouping, e.g. "(a (b c))"
    double spin_tol = 1e-9;               // reporting tolerance for density/orthogonality checks
};

struct Reading {
    int index = 0;
    int comms = 0;
    double weight = 0.0;
    DerivP deriv;
    TermP term;
    Value value;
    Mat spatial_norm;
    cplx spatial_trace;
    bool density_ok = false;
};

struct Report {
    std::vector<std::string> words;
    std::vector<std::string> leaf_vars;
    StructureP antecedent;
    FormulaP goal;
    int budget = 0;
    bool truncated = false;
    std::vector<Reading> readings;
    double max_spin_overlap = 0.0;
    bool spin_orthogonal = true;
    Mat combined;   // weighted mixture of reading densities
    Mat blocks;     // the same readings kept on orthogonal sectors
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& sentence) {
    std::vector<std::string> words;
    std::istringstream in(sentence);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

// every binary grouping of leaves[lo, hi); rightmost-nested trees come first
inline bool visit_bracketings(const std::vector<StructureP>& leaves, size_t lo, size_t hi,
                              const std::function<bool(StructureP)>& f) {
    if (hi - lo == 1) return f(leaves[lo]);
    for (size_t k = lo + 1; k < hi; ++k) {
        bool stop = visit_bracketings(leaves, lo, k, [&](StructureP l) {
            return visit_bracketings(leaves, k, hi, [&](StructureP r) { return f(sProd(l, r)); });
        });
        if (stop) return true;
    }
    return false;
}

// grouping spec: word, or (g1 g2 ... gk) folded right-associatively
struct GroupCursor {
    const std::string& s;
    size_t i = 0;
    const std::vector<StructureP>& leaves;
    size_t next = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    StructureP parse() {
        skip_ws();
        if (i >= s.size()) throw ParseError("bracketing: unexpected end of input");
        if (s[i] == '(') {
            ++i;
            std::vector<StructureP> parts;
            for (;;) {
                skip_ws();
                if (i < s.size() && s[i] == ')') {
                    ++i;
                    break;
                }
                parts.push_back(parse());
            }
            if (parts.empty()) throw ParseError("bracketing: empty group");
            StructureP acc = parts.back();
            for (size_t k = parts.size() - 1; k-- > 0;) acc = sProd(parts[k], acc);
            return acc;
        }
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
               s[i] != ')')
            ++i;
        if (i == start) throw ParseError("bracketing: expected a word");
        // word order against the sentence is verified up front, so the k-th
        // word in the grouping takes the k-th leaf
        if (next >= leaves.size()) throw ParseError("bracketing: more words than the sentence has");
        return leaves[next++];
    }
};

inline StructureP parse_grouping(const std::string& spec, const std::vector<std::string>& words,
                                 const std::vector<StructureP>& leaves) {
    // verify the grouping mentions exactly the sentence's words, in order
    std::vector<std::string> spec_words;
    std::string cur;
    for (char c : spec) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') {
            if (!cur.empty()) spec_words.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) spec_words.push_back(cur);
    if (spec_words != words)
        throw ParseError("bracketing: word sequence differs from the sentence");
    GroupCursor gc{spec, 0, leaves, 0};
    StructureP s = gc.parse();
    gc.skip_ws();
    if (gc.i != spec.size()) throw ParseError("bracketing: trailing input");
    return s;
}

} // namespace detail

// leaf variable names: the word itself, or word_k (1-based) on repeats
inline std::vector<std::string> leaf_names(const std::vector<std::string>& words) {
    std::vector<std::string> names;
    for (size_t i = 0; i < words.size(); ++i) {
        int count = 0;
        for (const auto& w : words) count += w == words[i];
        if (count == 1) {
            names.push_back(words[i]);
        } else {
            int k = 1;
            for (size_t j = 0; j < i; ++j) k += words[j] == words[i];
            names.push_back(words[i] + "_" + std::to_string(k));
        }
    }
    return names;
}

inline Report run_pipeline(const Lexicon& lex, const std::string& sentence,
                           const PipelineOptions& opt = {}) {
    Report rep;
    rep.words = detail::tokenize(sentence);
    if (rep.words.empty()) throw EmptyAntecedent("sentence has no words");
    rep.goal = opt.goal ? opt.goal : fAtom("s");
    rep.budget = opt.limits.max_comms;
    rep.warnings = lex.warnings;

    rep.leaf_vars = leaf_names(rep.words);
    std::vector<StructureP> leaves;
    std::vector<std::pair<std::string, std::string>> leaf_words;
    for (size_t i = 0; i < rep.words.size(); ++i) {
        const LexEntry* e = lex.find(rep.words[i]);
        if (!e) throw UnknownWord("word '" + rep.words[i] + "' is not in the lexicon");
        leaves.push_back(sLeaf(rep.leaf_vars[i], e->type));
        leaf_words.emplace_back(rep.leaf_vars[i], rep.words[i]);
    }

    SearchResult found;
    if (!opt.brackets.empty()) {
        rep.antecedent = detail::parse_grouping(opt.brackets, rep.words, leaves);
        found = prove(Sequent{rep.antecedent, rep.goal}, opt.limits);
        rep.truncated = found.truncated;
    } else {
        bool any_truncated = false;
        detail::visit_bracketings(leaves, 0, leaves.size(), [&](StructureP s) {
            SearchResult r = prove(Sequent{s, rep.goal}, opt.limits);
            any_truncated = any_truncated || r.truncated;
            if (!rep.antecedent) rep.antecedent = s; // remember the first as the display default
            if (r.derivations.empty()) return false;
            rep.antecedent = s;
            found = std::move(r);
            return true;
        });
        rep.truncated = found.derivations.empty() ? any_truncated : found.truncated;
    }

    size_t n = found.derivations.size();
    std::vector<double> weights = opt.reading_weights;
    if (weights.empty() && n > 0)
        weights.assign(n, 1.0 / static_cast<double>(n));
    if (n > 0 && weights.size() != n)
        throw LengthMismatch("pipeline: " + std::to_string(weights.size()) + " weights for " +
                             std::to_string(n) + " readings");

    Env env = lexicon_env(lex, leaf_words);
    for (size_t i = 0; i < n; ++i) {
        Reading r;
        r.index = static_cast<int>(i);
        r.deriv = found.derivations[i];
        r.comms = total_comms(r.deriv);
        r.weight = weights[i];
        r.term = extract_term(r.deriv);
        r.value = eval_term(r.term, env, lex.dims, opt.eval);
        r.spatial_norm = normalized_matrix(r.value.spatial, &r.spatial_trace);
        r.density_ok = is_density(r.spatial_norm, opt.spin_tol) && is_density(r.value.spin, opt.spin_tol);
        rep.readings.push_back(std::move(r));
    }

    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double ov = std::abs(trace(rep.readings[i].value.spin * rep.readings[j].value.spin));
            rep.max_spin_overlap = std::max(rep.max_spin_overlap, ov);
        }
    rep.spin_orthogonal = rep.max_spin_overlap < opt.spin_tol;

    if (n > 0) {
        std::vector<Value> vals;
        std::vector<Mat> blocks;
        for (const auto& r : rep.readings) {
            vals.push_back(r.value);
            blocks.push_back(r.weight * kron(r.spatial_norm, r.value.spin));
        }
        rep.combined = ambiguous_sum(vals, weights);
        rep.blocks = direct_sum(blocks);
    }
    return rep;
}

// ---- rendering ----------------------------------------------------------------

namespace detail {

inline std::string format_double(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

inline std::string format_cplx(const cplx& z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) +
           "i";
}

inline void format_mat(std::ostream& os, const Mat& m, const std::string& indent) {
    for (int i = 0; i < m.n; ++i) {
        os << indent << "[";
        for (int j = 0; j < m.n; ++j) {
            if (j) os << ", ";
            os << format_cplx(m.at(i, j));
        }
        os << "]\n";
    }
}

} // namespace detail

inline std::string report_text(const Report& rep) {
    std::ostringstream os;
    os << "sentence: ";
    for (size_t i = 0; i < rep.words.size(); ++i) os << (i ? " " : "") << rep.words[i];
    os << "\n";
    os << "goal: " << print_formula(rep.goal) << "\n";
    if (rep.antecedent) os << "bracketing: " << print_structure(rep.antecedent) << "\n";
    os << "budget: " << rep.budget << "\n";
    os << "readings: " << rep.readings.size() << " (truncated: " << (rep.truncated ? "yes" : "no")
       << ")\n";
    for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
    for (const auto& r : rep.readings) {
        os << "\nreading " << r.index << "  [comms " << r.comms << ", weight "
           << detail::format_double(r.weight) << "]\n";
        os << "  term: " << print_term(r.term) << "\n";
        os << "  ascii: " << print_term_ascii(r.term) << "\n";
        os << "  derivation:\n";
        std::istringstream lines(serialize_text(r.deriv));
        std::string line;
        while (std::getline(lines, line)) os << "    " << line << "\n";
        os << "  spatial trace: " << detail::format_cplx(r.spatial_trace) << "\n";
        os << "  spatial (normalized):\n";
        detail::format_mat(os, r.spatial_norm, "    ");
        os << "  spin:\n";
        detail::format_mat(os, r.value.spin, "    ");
        os << "  density checks: " << (r.density_ok ? "ok" : "FAILED") << "\n";
    }
    if (rep.readings.size() > 1) {
        os << "\nmax spin overlap: " << detail::format_double(rep.max_spin_overlap)
           << " (orthogonal: " << (rep.spin_orthogonal ? "yes" : "no") << ")\n";
    }
    if (!rep.readings.empty()) {
        os << "\ncombined density (weighted mixture):\n";
        detail::format_mat(os, rep.combined, "  ");
        os << "sector direct sum:\n";
        detail::format_mat(os, rep.blocks, "  ");
    }
    return os.str();
}

inline nlohmann::ordered_json report_json(const Report& rep) {
    nlohmann::ordered_json j;
    std::string sent;
    for (size_t i = 0; i < rep.words.size(); ++i) sent += (i ? " " : "") + rep.words[i];
    j["sentence"] = sent;
    j["goal"] = print_formula(rep.goal);
    j["bracketing"] = rep.antecedent ? print_structure(rep.antecedent) : "";
    j["budget"] = rep.budget;
    j["truncated"] = rep.truncated;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rep.readings) {
        nlohmann::ordered_json e;
        e["index"] = r.index;
        e["comms"] = r.comms;
        e["weight"] = r.weight;
        e["term"] = print_term(r.term);
        e["term_ascii"] = print_term_ascii(r.term);
        e["derivation"] = serialize_text(r.deriv);
        e["derivation_tree"] = derivation_to_json(r.deriv);
        e["spatial_trace"] = {r.spatial_trace.real(), r.spatial_trace.imag()};
        e["spatial"] = detail::matrix_to_json(r.spatial_norm);
        e["spin"] = detail::matrix_to_json(r.value.spin);
        e["density_ok"] = r.density_ok;
        arr.push_back(std::move(e));
    }
    j["readings"] = std::move(arr);
    j["max_spin_overlap"] = rep.max_spin_overlap;
    j["spin_orthogonal"] = rep.spin_orthogonal;
    if (!rep.readings.empty()) {
        j["combined"] = detail::matrix_to_json(rep.combined);
        j["direct_sum"] = detail::matrix_to_json(rep.blocks);
    }
    if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
    return j;
}

} // namespace lambek
