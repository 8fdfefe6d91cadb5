#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "lambek/pipeline.hpp"
#include "support.hpp"

using namespace lambek;

namespace {

FormulaP random_formula(detail::Rng& rng, int depth) {
    static const char* atoms[3] = {"s", "np", "n"};
    double roll = rng.canonical();
    if (depth <= 0 || roll < 0.35) return fAtom(atoms[rng.eng() % 3]);
    if (roll < 0.55) return fOver(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    if (roll < 0.75) return fUnder(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    if (roll < 0.875) return fDia(random_formula(rng, depth - 1));
    return fBox(random_formula(rng, depth - 1));
}

StructureP random_structure(detail::Rng& rng, int depth, int& leaf_id) {
    double roll = rng.canonical();
    if (depth <= 0 || roll < 0.4)
        return sLeaf("v" + std::to_string(leaf_id++), random_formula(rng, 2));
    if (roll < 0.8)
        return sProd(random_structure(rng, depth - 1, leaf_id),
                     random_structure(rng, depth - 1, leaf_id));
    return sBrack(random_structure(rng, depth - 1, leaf_id));
}

} // namespace

TEST_CASE("formulas survive print and reparse") {
    detail::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        FormulaP f = random_formula(rng, 5);
        CAPTURE(print_formula(f));
        FormulaP back = parse_formula(print_formula(f));
        CHECK(equal(f, back));
    }
}

TEST_CASE("structures and sequents survive print and reparse") {
    detail::Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        int leaf_id = 0;
        StructureP s = random_structure(rng, 4, leaf_id);
        CAPTURE(print_structure(s));
        CHECK(equal(s, parse_structure(print_structure(s))));

        Sequent q{s, random_formula(rng, 3)};
        Sequent back = parse_sequent(print_sequent(q));
        CHECK(equal(q.ante, back.ante));
        CHECK(equal(q.goal, back.goal));
    }
}

TEST_CASE("derivations survive both serializations") {
    std::vector<DerivP> battery;

    // everything the search produces for the bundled sentence and smaller goals
    for (const char* s :
         {"(man:n . (die:(n\\n)/(<>[]np\\s) . ((de:np/n . hond:n) . bijt:np\\(np\\s)))) |- n",
          "((de:np/n . hond:n) . bijt:np\\(np\\s)) |- <>[]np\\s", "x:<>[]np |- np",
          "x:<>np |- <>np", "f:np/n |- np/n", "<x:[]np> |- np"}) {
        SearchLimits lim;
        lim.max_comms = 1;
        SearchResult r = prove(parse_sequent(s), lim);
        for (auto& d : r.derivations) battery.push_back(d);
        for (auto& d : r.derivations) battery.push_back(expand_xleft(d));
    }

    // identity derivations over random formulas exercise the remaining rules
    detail::Rng rng(13);
    int made = 0;
    for (int i = 0; made < 40 && i < 400; ++i) {
        FormulaP f = random_formula(rng, 3);
        SearchLimits lim;
        lim.max_comms = 2;
        SearchResult r = prove(Sequent{sLeaf("x", f), f}, lim);
        for (auto& d : r.derivations) {
            battery.push_back(d);
            ++made;
        }
    }
    REQUIRE(battery.size() >= 50);

    for (const auto& d : battery) {
        CAPTURE(serialize_text(d));
        CHECK_NOTHROW(check(d));

        DerivP via_text = parse_derivation_text(serialize_text(d));
        CHECK(deriv_equal(d, via_text));
        CHECK_NOTHROW(check(via_text));

        DerivP via_json = derivation_from_json(derivation_to_json(d));
        CHECK(deriv_equal(d, via_json));
        CHECK(serialize_text(via_json) == serialize_text(d));
    }
}

TEST_CASE("derivation text parser rejects malformed input") {
    CHECK_THROWS_AS(parse_derivation_text(""), ParseError);
    CHECK_THROWS_AS(parse_derivation_text("Nonsense  x:np |- np"), ParseError);
    CHECK_THROWS_AS(parse_derivation_text("Ax x:np |- np"), ParseError);  // single space
    CHECK_THROWS_AS(parse_derivation_text("   Ax  x:np |- np"), ParseError); // odd indent
    // two roots
    CHECK_THROWS_AS(parse_derivation_text("Ax  x:np |- np\nAx  y:n |- n"), ParseError);
    // child with no parent level
    CHECK_THROWS_AS(parse_derivation_text("Ax  x:np |- np\n    Ax  y:n |- n"), ParseError);
}

TEST_CASE("random lexicons survive save and reload") {
    detail::Rng rng(14);
    for (int round = 0; round < 5; ++round) {
        nlohmann::ordered_json spec;
        spec["dims"] = {{"n", 2}, {"s", 3}, {"spin", 2 + round % 2}};
        auto words = nlohmann::ordered_json::object();
        for (int w = 0; w < 4; ++w) {
            nlohmann::ordered_json body;
            FormulaP type = random_formula(rng, 2);
            body["type"] = print_formula(type);
            body["spatial"] = {{"seed", rng.eng() % 1000}};
            body["spin"] = {{"seed", rng.eng() % 1000}};
            words["w" + std::to_string(w)] = std::move(body);
        }
        spec["words"] = std::move(words);

        Lexicon lex = lexicon_from_json(spec);
        std::string tmp = "roundtrip_random_tmp.lex";
        save_lexicon(lex, tmp);
        Lexicon back = load_lexicon(tmp);
        std::remove(tmp.c_str());

        REQUIRE(back.entries.size() == lex.entries.size());
        for (size_t i = 0; i < lex.entries.size(); ++i) {
            CHECK(back.entries[i].word == lex.entries[i].word);
            CHECK(equal(back.entries[i].type, lex.entries[i].type));
            CHECK(back.entries[i].spatial.data == lex.entries[i].spatial.data);
            CHECK(back.entries[i].spin.v == lex.entries[i].spin.v);
        }
    }
}

TEST_CASE("report json round trips through the derivation parser") {
    Lexicon lex = load_lexicon(support::lexicon_path("dutch.lex"));
    PipelineOptions opt;
    opt.goal = fAtom("n");
    opt.limits.max_comms = 1;
    Report rep = run_pipeline(lex, "man die de hond bijt", opt);
    nlohmann::ordered_json j = report_json(rep);
    REQUIRE(j.at("readings").size() == 2);
    for (const auto& reading : j.at("readings")) {
        DerivP text_form = parse_derivation_text(reading.at("derivation").get<std::string>());
        DerivP tree_form = derivation_from_json(reading.at("derivation_tree"));
        CHECK(deriv_equal(text_form, tree_form));
        CHECK_NOTHROW(check(text_form));
        CHECK_NOTHROW(check(tree_form));
    }
}
