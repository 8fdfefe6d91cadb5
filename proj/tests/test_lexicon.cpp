#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "lambek/lexicon.hpp"
#include "support.hpp"

using namespace lambek;

TEST_CASE("bundled dutch lexicon") {
    Lexicon lex = load_lexicon(support::lexicon_path("dutch.lex"));

    SECTION("dimensions and entry order") {
        CHECK(lex.dims.n == 2);
        CHECK(lex.dims.s == 2);
        CHECK(lex.dims.spin == 2);
        REQUIRE(lex.entries.size() == 5);
        CHECK(lex.entries[0].word == "man");
        CHECK(lex.entries[1].word == "die");
        CHECK(lex.entries[2].word == "de");
        CHECK(lex.entries[3].word == "hond");
        CHECK(lex.entries[4].word == "bijt");
        CHECK(lex.warnings.empty());
    }
    SECTION("types") {
        CHECK(print_formula(lex.find("man")->type) == "n");
        CHECK(print_formula(lex.find("die")->type) == "(n\\n)/(<>[]np\\s)");
        CHECK(print_formula(lex.find("de")->type) == "np/n");
        CHECK(print_formula(lex.find("bijt")->type) == "np\\(np\\s)");
        CHECK(lex.find("kat") == nullptr);
        CHECK(lex.has("hond"));
    }
    SECTION("literal spin matrices load verbatim") {
        const Mat& man = lex.find("man")->spin;
        CHECK(man.at(0, 0) == cplx(0.35, 0.0));
        CHECK(man.at(1, 1) == cplx(0.65, 0.0));
        CHECK(man.at(0, 1) == cplx(0.0, 0.0));
        const Mat& die = lex.find("die")->spin;
        CHECK(die.at(0, 0) == cplx(0.3, 0.0));
        CHECK(die.at(1, 1) == cplx(0.7, 0.0));
    }
    SECTION("realized data are valid densities") {
        for (const auto& e : lex.entries) {
            CHECK_NOTHROW(validate_density(to_matrix(e.spatial)));
            CHECK_NOTHROW(validate_density(e.spin));
        }
    }
    SECTION("spatial tensors carry the word's data signature") {
        CHECK(slots_name(lex.find("man")->spatial.slots) == "N");
        CHECK(slots_name(lex.find("die")->spatial.slots) == "N* N S* N");
        CHECK(slots_name(lex.find("de")->spatial.slots) == "N N*");
        CHECK(slots_name(lex.find("bijt")->spatial.slots) == "N* N* S");
    }
    SECTION("seeded entries are deterministic") {
        Lexicon again = load_lexicon(support::lexicon_path("dutch.lex"));
        for (size_t i = 0; i < lex.entries.size(); ++i) {
            CHECK(lex.entries[i].spatial.data == again.entries[i].spatial.data);
            CHECK(lex.entries[i].spin.v == again.entries[i].spin.v);
        }
    }
}

TEST_CASE("save and reload") {
    Lexicon lex = load_lexicon(support::lexicon_path("dutch.lex"));
    std::string tmp = "roundtrip_lexicon_tmp.lex";
    save_lexicon(lex, tmp);
    Lexicon back = load_lexicon(tmp);
    std::remove(tmp.c_str());

    REQUIRE(back.entries.size() == lex.entries.size());
    CHECK(back.dims.n == lex.dims.n);
    CHECK(back.dims.spin == lex.dims.spin);
    for (size_t i = 0; i < lex.entries.size(); ++i) {
        CHECK(back.entries[i].word == lex.entries[i].word);
        CHECK(equal(back.entries[i].type, lex.entries[i].type));
        // specs are preserved, so seeded matrices realize identically
        CHECK(back.entries[i].spatial_spec == lex.entries[i].spatial_spec);
        CHECK(back.entries[i].spin_spec == lex.entries[i].spin_spec);
        CHECK(back.entries[i].spatial.data == lex.entries[i].spatial.data);
        CHECK(back.entries[i].spin.v == lex.entries[i].spin.v);
    }
}

TEST_CASE("lexicon parsing errors") {
    SECTION("invalid json") {
        CHECK_THROWS_AS(parse_lexicon("{ not json"), ParseError);
    }
    SECTION("missing words object") {
        CHECK_THROWS_AS(parse_lexicon(R"({"dims": {"n": 2}})"), ParseError);
    }
    SECTION("missing fields name the word") {
        CHECK_THROWS_WITH(parse_lexicon(R"({"words": {"cat": {}}})"),
                          Catch::Matchers::ContainsSubstring("cat"));
        CHECK_THROWS_WITH(parse_lexicon(R"({"words": {"cat": {"type": "n"}}})"),
                          Catch::Matchers::ContainsSubstring("spatial"));
        CHECK_THROWS_WITH(
            parse_lexicon(R"({"words": {"cat": {"type": "n", "spatial": {"seed": 1}}}})"),
            Catch::Matchers::ContainsSubstring("spin"));
    }
    SECTION("matrix shape must match the type's data dimension") {
        // type n over dims.n = 2 needs a 2x2 literal; a 3x3 one must be rejected
        CHECK_THROWS_AS(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": [[1,0,0],[0,0,0],[0,0,0]],
            "spin": {"seed": 1}}}})"),
                        ParseError);
    }
    SECTION("bad matrix entries") {
        CHECK_THROWS_AS(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": [["x",0],[0,0]],
            "spin": {"seed": 1}}}})"),
                        ParseError);
    }
    SECTION("non-density literals are rejected with the word named") {
        // trace 2
        CHECK_THROWS_AS(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": [[1,0],[0,1]],
            "spin": {"seed": 1}}}})"),
                        DensityViolation);
        // not hermitian
        CHECK_THROWS_WITH(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": {"seed": 1},
            "spin": [[0.5,1],[0,0.5]]}}})"),
                          Catch::Matchers::ContainsSubstring("cat"));
        // negative eigenvalue
        CHECK_THROWS_AS(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": {"seed": 1},
            "spin": [[1.5,0],[0,-0.5]]}}})"),
                        DensityViolation);
    }
    SECTION("bad dims") {
        CHECK_THROWS_AS(parse_lexicon(R"({"dims": {"spin": 1}, "words": {}})"), ParseError);
        CHECK_THROWS_AS(parse_lexicon(R"({"dims": {"n": 0}, "words": {}})"), ParseError);
    }
    SECTION("bad spec shape") {
        CHECK_THROWS_AS(parse_lexicon(R"({"words": {"cat": {"type": "n",
            "spatial": {"mean": 0},
            "spin": {"seed": 1}}}})"),
                        ParseError);
    }
}

TEST_CASE("near-pure spin states warn") {
    Lexicon lex = parse_lexicon(R"({"words": {"cat": {"type": "n",
        "spatial": {"seed": 5},
        "spin": [[1,0],[0,0]]}}})");
    REQUIRE(lex.warnings.size() == 1);
    CHECK(lex.warnings[0].find("cat") != std::string::npos);
    CHECK(lex.warnings[0].find("pure") != std::string::npos);
}

TEST_CASE("seeded generators") {
    SECTION("dense seeds give full-support densities") {
        detail::Rng rng(7);
        Mat rho = detail::random_density(4, rng);
        CHECK_NOTHROW(validate_density(rho));
        EigH eig = eig_hermitian(rho);
        CHECK(eig.values.front() > 0.0);
    }
    SECTION("diagonal seeds give strictly positive diagonals") {
        detail::Rng rng(9);
        Mat rho = detail::diagonal_density(3, rng);
        CHECK_NOTHROW(validate_density(rho));
        for (int i = 0; i < 3; ++i) {
            CHECK(rho.at(i, i).real() > 0.0);
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(rho.at(i, j) == cplx(0.0, 0.0));
        }
    }
    SECTION("different seeds differ") {
        detail::Rng a(1), b(2);
        Mat ra = detail::random_density(2, a);
        Mat rb = detail::random_density(2, b);
        CHECK(ra.v != rb.v);
    }
}
