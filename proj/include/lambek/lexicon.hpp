#pragma once

// Lexicon files: per-word type assignments with operator data for the spatial
// factors and the auxiliary spin factor. Entries are literal matrices or
// seeded pseudorandom densities; raw specs are kept so files round-trip.

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tensor.hpp"

namespace lambek {

struct LexEntry {
    std::string word;
    FormulaP type;
    Tensor spatial; // over the word's data signature
    Mat spin;
    nlohmann::ordered_json spatial_spec;
    nlohmann::ordered_json spin_spec;
};

struct Lexicon {
    Dims dims;
    std::vector<LexEntry> entries;
    std::vector<std::string> warnings;

    const LexEntry* find(const std::string& word) const {
        for (const auto& e : entries)
            if (e.word == word) return &e;
        return nullptr;
    }
    bool has(const std::string& word) const { return find(word) != nullptr; }
};

namespace detail {

// deterministic across platforms: raw engine output mapped manually
struct Rng {
    std::mt19937_64 eng;
    bool have_spare = false;
    double spare = 0.0;

    explicit Rng(uint64_t seed) : eng(seed) {}

    double canonical() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u = 0.0;
        while (u <= 0.0) u = canonical();
        double v = canonical();
        double r = std::sqrt(-2.0 * std::log(u));
        spare = r * std::sin(2.0 * M_PI * v);
        have_spare = true;
        return r * std::cos(2.0 * M_PI * v);
    }
};

inline Mat random_density(int n, Rng& rng) {
    Mat g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = cplx(rng.gaussian(), rng.gaussian());
    Mat rho = g * adjoint(g);
    cplx tr = trace(rho);
    if (std::abs(tr) < 1e-15) throw DensityViolation("random density: zero trace");
    return (1.0 / tr) * rho;
}

inline Mat diagonal_density(int n, Rng& rng) {
    std::vector<double> d(static_cast<size_t>(n));
    double sum = 0.0;
    for (auto& x : d) {
        x = rng.canonical() + 1e-3; // keep every level populated
        sum += x;
    }
    Mat rho(n);
    for (int i = 0; i < n; ++i) rho.at(i, i) = d[static_cast<size_t>(i)] / sum;
    return rho;
}

inline cplx parse_entry(const nlohmann::json& v, const std::string& where) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw ParseError(where + ": matrix entry must be a number or [re, im]");
}

inline Mat parse_matrix(const nlohmann::json& v, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        throw ParseError(where + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                         " matrix");
    Mat m(dim);
    for (int i = 0; i < dim; ++i) {
        const auto& row = v[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw ParseError(where + ": row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < dim; ++j) m.at(i, j) = parse_entry(row[static_cast<size_t>(j)], where);
    }
    return m;
}

// spec = literal rows | {"seed": k} | {"seed": k, "diagonal": true}
inline Mat realize_spec(const nlohmann::json& spec, int dim, const std::string& where) {
    if (spec.is_array()) return parse_matrix(spec, dim, where);
    if (spec.is_object() && spec.contains("seed")) {
        Rng rng(spec["seed"].get<uint64_t>());
        bool diag = spec.value("diagonal", false);
        return diag ? diagonal_density(dim, rng) : random_density(dim, rng);
    }
    throw ParseError(where + ": expected a matrix literal or {\"seed\": k}");
}

inline nlohmann::ordered_json matrix_to_json(const Mat& m) {
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int j = 0; j < m.n; ++j) {
            cplx z = m.at(i, j);
            if (z.imag() == 0.0)
                row.push_back(z.real());
            else
                row.push_back(nlohmann::ordered_json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline Lexicon lexicon_from_json(const nlohmann::ordered_json& j) {
    Lexicon lex;
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        lex.dims.n = d.value("n", 2);
        lex.dims.s = d.value("s", 2);
        lex.dims.spin = d.value("spin", 2);
        if (lex.dims.n < 1 || lex.dims.s < 1 || lex.dims.spin < 2)
            throw ParseError("lexicon: dims must satisfy n,s >= 1 and spin >= 2");
    }
    if (!j.contains("words") || !j.at("words").is_object())
        throw ParseError("lexicon: missing 'words' object");
    for (const auto& [word, body] : j.at("words").items()) {
        if (!body.is_object() || !body.contains("type"))
            throw ParseError("lexicon: word '" + word + "' needs a 'type'");
        LexEntry e;
        e.word = word;
        e.type = parse_formula(body.at("type").get<std::string>());

        Signature dsig = data_signature(e.type);
        int sdim = 1;
        for (const auto& f : dsig) sdim *= lex.dims.dim(f.space);
        if (!body.contains("spatial"))
            throw ParseError("lexicon: word '" + word + "' needs 'spatial' data");
        e.spatial_spec = body.at("spatial");
        Mat sm = detail::realize_spec(e.spatial_spec, sdim, "lexicon: '" + word + "' spatial");
        try {
            validate_density(sm);
        } catch (const DensityViolation& err) {
            throw DensityViolation("lexicon: '" + word + "' spatial: " + err.what());
        }
        e.spatial = from_matrix(sm, dsig, lex.dims);

        if (!body.contains("spin"))
            throw ParseError("lexicon: word '" + word + "' needs 'spin' data");
        e.spin_spec = body.at("spin");
        e.spin = detail::realize_spec(e.spin_spec, lex.dims.spin, "lexicon: '" + word + "' spin");
        try {
            validate_density(e.spin);
        } catch (const DensityViolation& err) {
            throw DensityViolation("lexicon: '" + word + "' spin: " + err.what());
        }
        EigH eig = eig_hermitian(e.spin);
        if (!eig.values.empty() && eig.values.back() > 1.0 - 1e-6)
            lex.warnings.push_back("lexicon: '" + word +
                                   "' spin state is within 1e-6 of a pure projector; "
                                   "measurements against orthogonal states will degenerate");
        lex.entries.push_back(std::move(e));
    }
    return lex;
}

inline Lexicon parse_lexicon(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("lexicon: invalid json: ") + e.what());
    }
    return lexicon_from_json(j);
}

inline Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LambekError("cannot open lexicon file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_lexicon(text);
}

inline nlohmann::ordered_json lexicon_to_json(const Lexicon& lex) {
    nlohmann::ordered_json j;
    j["dims"] = {{"n", lex.dims.n}, {"s", lex.dims.s}, {"spin", lex.dims.spin}};
    auto words = nlohmann::ordered_json::object();
    for (const auto& e : lex.entries) {
        nlohmann::ordered_json w;
        w["type"] = print_formula(e.type);
        w["spatial"] = e.spatial_spec;
        w["spin"] = e.spin_spec;
        words[e.word] = std::move(w);
    }
    j["words"] = std::move(words);
    return j;
}

inline void save_lexicon(const Lexicon& lex, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw LambekError("cannot write lexicon file '" + path + "'");
    out << lexicon_to_json(lex).dump(2) << "\n";
}

} // namespace lambek
