#pragma once

// Shared test helpers: seeded random operator data and a harness comparing
// both sides of a rewrite under many random assignments.

#include <string>
#include <vector>

#include "lambek/interpret.hpp"

namespace support {

using namespace lambek;

inline Mat random_density(int n, uint64_t seed) {
    detail::Rng rng(seed);
    return detail::random_density(n, rng);
}

inline Mat random_hermitian(int n, detail::Rng& rng) {
    Mat m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (i == j) {
                m.at(i, i) = cplx(rng.gaussian(), 0.0);
            } else {
                m.at(i, j) = cplx(rng.gaussian(), rng.gaussian());
                m.at(j, i) = std::conj(m.at(i, j));
            }
        }
    }
    return m;
}

inline Mat random_unitary(int n, detail::Rng& rng) {
    return eig_hermitian(random_hermitian(n, rng)).vectors;
}

// random word-style value over a formula's data signature
inline Value random_value(const FormulaP& type, const Dims& dims, detail::Rng& rng) {
    Signature dsig = data_signature(type);
    int d = 1;
    for (const auto& f : dsig) d *= dims.dim(f.space);
    Value v;
    v.spatial = from_matrix(detail::random_density(d, rng), dsig, dims);
    v.spin = detail::random_density(dims.spin, rng);
    return v;
}

struct BetaTrial {
    int total = 0;
    int checked = 0;
    int skipped = 0;
    double max_spatial_diff = 0.0;
    double max_spin_diff = 0.0;
};

// evaluates lhs and rhs under `trials` random assignments of the named free
// variables; trials where either side degenerates are skipped
inline BetaTrial compare_terms(const TermP& lhs, const TermP& rhs,
                               const std::vector<std::pair<std::string, FormulaP>>& frees,
                               const Dims& dims, int trials, uint64_t seed,
                               const EvalOptions& opt = {}) {
    BetaTrial out;
    detail::Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        Env env;
        for (const auto& [name, type] : frees) env[name] = random_value(type, dims, rng);
        ++out.total;
        try {
            Value a = eval_term(lhs, env, dims, opt);
            Value b = eval_term(rhs, env, dims, opt);
            out.max_spatial_diff = std::max(out.max_spatial_diff, tensor_max_diff(a.spatial, b.spatial));
            out.max_spin_diff = std::max(out.max_spin_diff, max_abs_diff(a.spin, b.spin));
            ++out.checked;
        } catch (const DegenerateMeasurement&) {
            ++out.skipped;
        } catch (const LadderOverflow&) {
            ++out.skipped;
        }
    }
    return out;
}

inline std::string lexicon_path(const std::string& name) {
    return std::string(LAMBEK_LEXICON_DIR) + "/" + name;
}

} // namespace support
