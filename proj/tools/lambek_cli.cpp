// Command-line front end: parse syntax, search for derivations, interpret
// sentences against a lexicon, check stored derivations, and expand the
// compiled hypothetical rule into primitive structural moves.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lambek/pipeline.hpp"

namespace {

using namespace lambek;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::string text((std::istreambuf_iterator<char>(std::cin)),
                         std::istreambuf_iterator<char>());
        return text;
    }
    std::ifstream in(path);
    if (!in) throw LambekError("cannot open '" + path + "'");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

double spin_tol_from_env() {
    const char* raw = std::getenv("LAMBEK_SPIN_TOL");
    if (!raw) return 1e-9;
    try {
        double v = std::stod(raw);
        if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw LambekError("LAMBEK_SPIN_TOL must be a positive number");
}

// weights file: {"box": [...], "dia_unitaries": [[[...]]], "readings": [...]}
void load_weights(const std::string& path, int spin_dim, EvalOptions& eval,
                  std::vector<double>& reading_weights) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_input(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("weights file: invalid json: " + std::string(e.what()));
    }
    if (j.contains("box")) {
        for (const auto& v : j["box"]) eval.box_weights.push_back(v.get<double>());
    }
    if (j.contains("dia_unitaries")) {
        for (const auto& m : j["dia_unitaries"])
            eval.dia_unitaries.push_back(detail::parse_matrix(m, spin_dim, "weights file"));
    }
    if (j.contains("readings")) {
        for (const auto& v : j["readings"]) reading_weights.push_back(v.get<double>());
    }
}

int cmd_parse(const std::string& input, const std::string& kind) {
    if (kind == "formula") {
        FormulaP f = parse_formula(input);
        std::cout << print_formula(f) << "\n";
        std::cout << "signature: " << signature_name(signature(f)) << "\n";
        std::cout << "data signature: " << signature_name(data_signature(f)) << "\n";
    } else if (kind == "structure") {
        StructureP s = parse_structure(input);
        std::cout << print_structure(s) << "\n";
    } else {
        Sequent s = parse_sequent(input);
        std::cout << print_sequent(s) << "\n";
    }
    return 0;
}

int cmd_prove(const std::string& input, const SearchLimits& limits, const std::string& format) {
    Sequent s = parse_sequent(input);
    SearchResult res = prove(s, limits);
    if (format == "structured") {
        nlohmann::ordered_json j;
        j["sequent"] = print_sequent(s);
        j["budget"] = limits.max_comms;
        j["truncated"] = res.truncated;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& d : res.derivations) {
            TermP t = extract_term(d);
            nlohmann::ordered_json e;
            e["comms"] = total_comms(d);
            e["term"] = print_term(t);
            e["term_ascii"] = print_term_ascii(t);
            e["derivation"] = derivation_to_json(d);
            arr.push_back(std::move(e));
        }
        j["derivations"] = std::move(arr);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "derivations: " << res.derivations.size()
                  << " (truncated: " << (res.truncated ? "yes" : "no") << ")\n";
        int i = 0;
        for (const auto& d : res.derivations) {
            TermP t = extract_term(d);
            std::cout << "\nderivation " << i++ << "  [comms " << total_comms(d) << "]\n";
            std::cout << "  term: " << print_term(t) << "\n";
            std::cout << "  ascii: " << print_term_ascii(t) << "\n";
            std::istringstream lines(serialize_text(d));
            std::string line;
            while (std::getline(lines, line)) std::cout << "  " << line << "\n";
        }
    }
    return res.derivations.empty() ? 2 : 0;
}

int cmd_interpret(const std::string& sentence, const std::string& lexicon_path,
                  const std::string& goal, const SearchLimits& limits,
                  const std::string& weights_path, const std::string& brackets,
                  const std::string& format, bool explicit_sum) {
    Lexicon lex = load_lexicon(lexicon_path);
    PipelineOptions opt;
    opt.goal = parse_formula(goal);
    opt.limits = limits;
    opt.brackets = brackets;
    opt.eval.explicit_sum = explicit_sum;
    opt.spin_tol = spin_tol_from_env();
    if (!weights_path.empty())
        load_weights(weights_path, lex.dims.spin, opt.eval, opt.reading_weights);
    Report rep = run_pipeline(lex, sentence, opt);
    if (format == "structured")
        std::cout << report_json(rep).dump(2) << "\n";
    else
        std::cout << report_text(rep);
    return rep.readings.empty() ? 2 : 0;
}

int cmd_check(const std::string& path) {
    std::string text = read_input(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty derivation input");
    DerivP d = text[first] == '{' ? derivation_from_json(nlohmann::json::parse(text))
                                  : parse_derivation_text(text);
    check(d);
    std::cout << "ok: " << print_sequent(d->seq) << "\n";
    std::cout << "term: " << print_term(extract_term(d)) << "\n";
    return 0;
}

int cmd_expand(const std::string& input, const SearchLimits& limits, const std::string& format) {
    Sequent s = parse_sequent(input);
    SearchResult res = prove(s, limits);
    if (format == "structured") {
        nlohmann::ordered_json j;
        j["sequent"] = print_sequent(s);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& d : res.derivations) {
            DerivP e = expand_xleft(d);
            check(e);
            nlohmann::ordered_json entry;
            entry["compiled"] = derivation_to_json(d);
            entry["expanded"] = derivation_to_json(e);
            entry["term"] = print_term(extract_term(d));
            entry["expanded_term"] = print_term(extract_term(e));
            arr.push_back(std::move(entry));
        }
        j["derivations"] = std::move(arr);
        std::cout << j.dump(2) << "\n";
    } else {
        int i = 0;
        for (const auto& d : res.derivations) {
            DerivP e = expand_xleft(d);
            check(e);
            std::cout << "derivation " << i++ << "\n";
            std::cout << "  compiled term: " << print_term(extract_term(d)) << "\n";
            std::cout << "  expanded term: " << print_term(extract_term(e)) << "\n";
            std::cout << "  expanded derivation:\n";
            std::istringstream lines(serialize_text(e));
            std::string line;
            while (std::getline(lines, line)) std::cout << "    " << line << "\n";
        }
    }
    return res.derivations.empty() ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Typelogical parsing with controlled structural rules and operator semantics"};
    app.require_subcommand(1);

    std::string input, kind = "sequent", format = "text";
    std::string sentence, lexicon_path, goal = "s", weights_path, brackets, file_path;
    SearchLimits limits;
    bool explicit_sum = false;

    auto* p_parse = app.add_subcommand("parse", "Parse and reprint a formula, structure, or sequent");
    p_parse->add_option("input", input, "text to parse")->required();
    p_parse->add_option("--kind", kind, "formula | structure | sequent")
        ->check(CLI::IsMember({"formula", "structure", "sequent"}));

    auto* p_prove = app.add_subcommand("prove", "Search for derivations of a sequent");
    p_prove->add_option("sequent", input, "e.g. \"x:np |- np\"")->required();
    p_prove->add_option("--budget", limits.max_comms, "structural budget (commutation cost)");
    p_prove->add_option("--max-derivations", limits.max_derivations, "enumeration cap");
    p_prove->add_option("--format", format, "text | structured")
        ->check(CLI::IsMember({"text", "structured"}));

    auto* p_interp = app.add_subcommand("interpret", "Analyze a sentence against a lexicon");
    p_interp->add_option("sentence", sentence, "whitespace-separated words")->required();
    p_interp->add_option("--lexicon", lexicon_path, "lexicon json file")->required();
    p_interp->add_option("--goal", goal, "goal type (default s)");
    p_interp->add_option("--budget", limits.max_comms, "structural budget");
    p_interp->add_option("--max-derivations", limits.max_derivations, "enumeration cap");
    p_interp->add_option("--weights", weights_path, "json file: box weights, unitaries, reading weights");
    p_interp->add_option("--brackets", brackets, "explicit grouping, e.g. \"(a (b c))\"");
    p_interp->add_option("--format", format, "text | structured")
        ->check(CLI::IsMember({"text", "structured"}));
    p_interp->add_flag("--explicit-sum", explicit_sum, "contract through the explicit metric");

    auto* p_check = app.add_subcommand("check", "Validate a stored derivation (text or json)");
    p_check->add_option("file", file_path, "path or - for stdin")->required();

    auto* p_expand = app.add_subcommand("expand", "Expand compiled hypothetical steps into primitive moves");
    p_expand->add_option("sequent", input, "e.g. \"x:np |- np\"")->required();
    p_expand->add_option("--budget", limits.max_comms, "structural budget");
    p_expand->add_option("--format", format, "text | structured")
        ->check(CLI::IsMember({"text", "structured"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (p_parse->parsed()) return cmd_parse(input, kind);
        if (p_prove->parsed()) return cmd_prove(input, limits, format);
        if (p_interp->parsed())
            return cmd_interpret(sentence, lexicon_path, goal, limits, weights_path, brackets,
                                 format, explicit_sum);
        if (p_check->parsed()) return cmd_check(file_path);
        if (p_expand->parsed()) return cmd_expand(input, limits, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
