#include <catch2/catch_amalgamated.hpp>

#include "lambek/prove.hpp"

using namespace lambek;

namespace {

SearchResult search(const std::string& s, int budget = 0, int max_depth = 64) {
    SearchLimits lim;
    lim.max_comms = budget;
    lim.max_depth = max_depth;
    return prove(parse_sequent(s), lim);
}

const char* kRelClause = "((de:np/n . hond:n) . bijt:np\\(np\\s)) |- <>[]np\\s";
const char* kNounPhrase =
    "(man:n . (die:(n\\n)/(<>[]np\\s) . ((de:np/n . hond:n) . bijt:np\\(np\\s)))) |- n";

} // namespace

TEST_CASE("axioms and eliminations") {
    SECTION("identity on an atom") {
        SearchResult r = search("x:np |- np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(r.derivations[0]->rule == Rule::Ax);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "x");
        CHECK_FALSE(r.truncated);
    }
    SECTION("forward elimination") {
        SearchResult r = search("(f:np/n . a:n) |- np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "(f <| a)");
    }
    SECTION("backward elimination stacks") {
        SearchResult r = search("(a:np . (b:np . v:np\\(np\\s))) |- s");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "(a |> (b |> v))");
    }
    SECTION("non-theorems") {
        CHECK(search("x:np |- n").derivations.empty());
        CHECK(search("(a:n . f:np/n) |- np").derivations.empty()); // wrong side
        CHECK(search("x:[]np |- np").derivations.empty());          // box needs its bracket
    }
}

TEST_CASE("introductions") {
    SECTION("right slash") {
        SearchResult r = search("f:np/n |- np/n");
        REQUIRE(r.derivations.size() == 1);
        CHECK(alpha_equal(extract_term(r.derivations[0]),
                          tLamR("a", nullptr, tAppR(tVar("f"), tVar("a")))));
    }
    SECTION("left slash") {
        SearchResult r = search("v:np\\s |- np\\s");
        REQUIRE(r.derivations.size() == 1);
        CHECK(alpha_equal(extract_term(r.derivations[0]),
                          tLamL("a", nullptr, tAppL(tVar("a"), tVar("v")))));
    }
    SECTION("lifting") {
        SearchResult r = search("x:np |- s/(np\\s)");
        REQUIRE(r.derivations.size() == 1);
        CHECK(alpha_equal(extract_term(r.derivations[0]),
                          tLamR("f", nullptr, tAppL(tVar("x"), tVar("f")))));
    }
}

TEST_CASE("modal rules") {
    SECTION("unpack a packed hypothesis") {
        SearchResult r = search("x:<>[]np |- np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "vee(cup(x))");
    }
    SECTION("diamond re-introduction") {
        SearchResult r = search("x:<>np |- <>np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "cap(cup(x))");
    }
    SECTION("box under a bracket") {
        SearchResult r = search("<x:[]np> |- np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "vee(x)");
    }
    SECTION("box introduction") {
        SearchResult r = search("x:[]np |- []np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "wedge(vee(x))");
    }
    SECTION("a bracketed box is not a diamond") {
        CHECK(search("<x:[]np> |- <>np").derivations.empty());
    }
    SECTION("diamond goal needs the bracket") {
        CHECK(search("x:np |- <>np").derivations.empty());
        SearchResult r = search("<x:np> |- <>np");
        REQUIRE(r.derivations.size() == 1);
        CHECK(print_term_ascii(extract_term(r.derivations[0])) == "cap(x)");
    }
}

TEST_CASE("hypothetical rule budgets") {
    SECTION("budget zero: only the cheapest position derives, others are cut") {
        SearchResult r = search(kRelClause, 0);
        REQUIRE(r.derivations.size() == 1);
        CHECK(r.truncated);
        CHECK(total_comms(r.derivations[0]) == 0);
        CHECK(r.derivations[0]->rule == Rule::XLeft);
        CHECK(r.derivations[0]->comms == 0);
    }
    SECTION("budget one: both readings, nothing cut") {
        SearchResult r = search(kRelClause, 1);
        REQUIRE(r.derivations.size() == 2);
        CHECK_FALSE(r.truncated);
        CHECK(total_comms(r.derivations[0]) == 0);
        CHECK(total_comms(r.derivations[1]) == 1);
    }
    SECTION("budget two: no further readings appear") {
        SearchResult r = search(kRelClause, 2);
        CHECK(r.derivations.size() == 2);
        CHECK_FALSE(r.truncated);
    }
    SECTION("full noun phrase counts") {
        CHECK(search(kNounPhrase, 0).derivations.size() == 1);
        CHECK(search(kNounPhrase, 0).truncated);
        CHECK(search(kNounPhrase, 1).derivations.size() == 2);
        CHECK_FALSE(search(kNounPhrase, 1).truncated);
        CHECK(search(kNounPhrase, 2).derivations.size() == 2);
    }
    SECTION("readings come cheapest first") {
        SearchResult r = search(kNounPhrase, 1);
        REQUIRE(r.derivations.size() == 2);
        TermP subj = extract_term(r.derivations[0]);
        TermP obj = extract_term(r.derivations[1]);
        CHECK(print_term_ascii(subj) ==
              "(man |> (die <| laml h0.(vee(cup(h0)) |> ((de <| hond) |> bijt))))");
        CHECK(print_term_ascii(obj) ==
              "(man |> (die <| laml h4.comm^1(((de <| hond) |> (vee(cup(h4)) |> bijt)))))");
    }
}

TEST_CASE("search outputs satisfy the checker") {
    for (const char* s : {"x:np |- np", "(f:np/n . a:n) |- np", "x:<>[]np |- np",
                          "x:<>np |- <>np", "f:np/n |- np/n", kRelClause, kNounPhrase}) {
        SearchResult r = search(s, 1);
        for (const auto& d : r.derivations) CHECK_NOTHROW(check(d));
    }
}

TEST_CASE("derivation checker rejects broken proofs") {
    SECTION("wrong axiom type") {
        DerivP bad = dNode(Rule::Ax, parse_sequent("x:np |- n"), {});
        CHECK_THROWS_AS(check(bad), InvalidInference);
    }
    SECTION("wrong premise count") {
        DerivP ax = dNode(Rule::Ax, parse_sequent("x:np |- np"), {});
        DerivP bad = dNode(Rule::ER, parse_sequent("x:np |- np"), {ax});
        CHECK_THROWS_AS(check(bad), InvalidInference);
    }
    SECTION("tampered sequent") {
        SearchResult r = search(kRelClause, 1);
        REQUIRE_FALSE(r.derivations.empty());
        const Derivation& good = *r.derivations[0];
        DerivP bad = dNode(good.rule, Sequent{good.seq.ante, parse_formula("<>[]np\\np")},
                           good.premises, good.comms);
        CHECK_THROWS_AS(check(bad), InvalidInference);
    }
    SECTION("wrong structural cost") {
        SearchResult r = search(kRelClause, 1);
        REQUIRE(r.derivations.size() == 2);
        const Derivation& obj = *r.derivations[1];
        REQUIRE(obj.rule == Rule::XLeft);
        DerivP bad = dNode(Rule::XLeft, obj.seq, obj.premises, 0); // really costs 1
        CHECK_THROWS_AS(check(bad), InvalidInference);
    }
    SECTION("non-linear antecedent") {
        DerivP bad = dNode(Rule::Ax, Sequent{parse_structure("x:np"), parse_formula("np")}, {});
        DerivP worse =
            dNode(Rule::ER, Sequent{parse_structure("(x:np . x:np)"), parse_formula("np")},
                  {bad, bad});
        CHECK_THROWS_AS(check(worse), LambekError);
    }
}

TEST_CASE("expansion into primitive moves") {
    SECTION("subject reading uses no commutations") {
        SearchResult r = search(kRelClause, 1);
        REQUIRE(r.derivations.size() == 2);

        DerivP sub = expand_xleft(r.derivations[0]);
        CHECK_NOTHROW(check(sub));
        CHECK(alpha_equal(extract_term(sub), extract_term(r.derivations[0])));
        // expansion uses IL + EDia + EBox instead of the compiled rule
        CHECK(sub->rule == Rule::IL);
        CHECK(sub->premises[0]->rule == Rule::EDia);

        DerivP obj = expand_xleft(r.derivations[1]);
        CHECK_NOTHROW(check(obj));
        CHECK(alpha_equal(extract_term(obj), extract_term(r.derivations[1])));
        CHECK(obj->premises[0]->premises[1]->rule == Rule::CommDia);
    }
    SECTION("whole noun phrase expands and still checks") {
        SearchResult r = search(kNounPhrase, 1);
        REQUIRE(r.derivations.size() == 2);
        for (const auto& d : r.derivations) {
            DerivP e = expand_xleft(d);
            CHECK_NOTHROW(check(e));
            CHECK(alpha_equal(extract_term(e), extract_term(d)));
        }
    }
}

TEST_CASE("limits") {
    SECTION("depth cutoff reports truncation") {
        SearchResult r = search(kNounPhrase, 1, 3);
        CHECK(r.derivations.empty());
        CHECK(r.truncated);
    }
    SECTION("derivation cap reports truncation") {
        SearchLimits lim;
        lim.max_comms = 1;
        lim.max_derivations = 1;
        SearchResult r = prove(parse_sequent(kNounPhrase), lim);
        CHECK(r.derivations.size() == 1);
        CHECK(r.truncated);
    }
    SECTION("non-linear input is rejected up front") {
        CHECK_THROWS_AS(search("(x:np . x:np/n) |- np"), NonLinearVariable);
    }
}
