#pragma once

// Compositional interpretation of directional lambda terms: spatial factors
// evaluate by tensor contraction over each word's data signature, while the
// auxiliary spin factor evolves through measurement-style updates.

#include <map>
#include <string>
#include <vector>

#include "lexicon.hpp"
#include "spin.hpp"
#include "term.hpp"

namespace lambek {

struct Value {
    Tensor spatial;
    Mat spin;
};

struct EvalOptions {
    bool explicit_sum = false;        // thread the inner-product metric through contractions
    std::vector<double> box_weights;  // measurement weights for the box collapse
    std::vector<Mat> dia_unitaries;   // unitary chain for the diamond evolution
};

using Env = std::map<std::string, Value>;

namespace detail {

template <class F>
Mat spin_guarded(const TermP& t, F&& f) {
    try {
        return f();
    } catch (const DegenerateMeasurement& e) {
        throw DegenerateMeasurement(std::string(e.what()) + " while evaluating " + print_term(t));
    } catch (const LadderOverflow& e) {
        throw LadderOverflow(std::string(e.what()) + " while evaluating " + print_term(t));
    }
}

struct Evaluator {
    const Dims& dims;
    const EvalOptions& opt;
    Metric metric;

    Evaluator(const Dims& d, const EvalOptions& o) : dims(d), opt(o), metric(d) {}

    const Metric* metric_ptr() const { return opt.explicit_sum ? &metric : nullptr; }

    Mat mixed_spin() const {
        Mat m = Mat::identity(dims.spin);
        return (1.0 / static_cast<double>(dims.spin)) * m;
    }

    Value eval(const TermP& t, Env& env) {
        switch (t->kind) {
            case TKind::Var:
            case TKind::Const: {
                auto it = env.find(t->name);
                if (it == env.end()) throw EvalError("unbound variable '" + t->name + "'");
                return it->second;
            }
            case TKind::AppR: {
                Value fn = eval(t->a, env);
                Value arg = eval(t->b, env);
                Value out;
                out.spatial = apply_forward(fn.spatial, arg.spatial, metric_ptr());
                // left operand in surface order measures the right one
                out.spin = spin_guarded(t, [&] { return star(arg.spin, fn.spin); });
                return out;
            }
            case TKind::AppL: {
                Value arg = eval(t->a, env);
                Value fn = eval(t->b, env);
                Value out;
                out.spatial = apply_backward(arg.spatial, fn.spatial, metric_ptr());
                out.spin = spin_guarded(t, [&] { return star(fn.spin, arg.spin); });
                return out;
            }
            case TKind::LamR:
            case TKind::LamL: {
                if (!t->annot)
                    throw EvalError("binder '" + t->name + "' carries no type annotation");
                bool left = t->kind == TKind::LamL;
                Value bound;
                bound.spatial = bound_var_tensor(data_signature(t->annot), t->name, dims);
                bound.spin = mixed_spin();
                auto saved = env.find(t->name);
                Value old;
                bool had = saved != env.end();
                if (had) old = saved->second;
                env[t->name] = std::move(bound);
                Value body = eval(t->a, env);
                if (had)
                    env[t->name] = std::move(old);
                else
                    env.erase(t->name);
                Value out;
                out.spatial = close_binder(body.spatial, t->name, left);
                out.spin = body.spin;
                return out;
            }
            case TKind::Vee: {
                Value v = eval(t->a, env);
                v.spin = spin_guarded(t, [&] { return project_box(v.spin, opt.box_weights); });
                return v;
            }
            case TKind::Wedge: {
                Value v = eval(t->a, env);
                v.spin = spin_guarded(t, [&] { return evolve_dia(v.spin, opt.dia_unitaries); });
                return v;
            }
            case TKind::Cup: {
                Value v = eval(t->a, env);
                v.spin = spin_guarded(t, [&] { return evolve_dia(v.spin, opt.dia_unitaries); });
                return v;
            }
            case TKind::Cap: {
                Value v = eval(t->a, env);
                v.spin = spin_guarded(t, [&] { return project_box(v.spin, opt.box_weights); });
                return v;
            }
            case TKind::Comm: {
                Value v = eval(t->a, env);
                v.spin = spin_guarded(t, [&] { return raise_level(v.spin, t->comms); });
                return v;
            }
            case TKind::And:
                throw EvalError("parallel composition has no numeric interpretation: " +
                                print_term(t));
        }
        throw EvalError("eval: unreachable term kind");
    }
};

} // namespace detail

inline Value eval_term(const TermP& t, const Env& env, const Dims& dims,
                       const EvalOptions& opt = {}) {
    detail::Evaluator ev(dims, opt);
    Env scratch = env;
    return ev.eval(t, scratch);
}

// environment mapping derivation leaf variables to lexicon data
inline Env lexicon_env(const Lexicon& lex,
                       const std::vector<std::pair<std::string, std::string>>& leaf_words) {
    Env env;
    for (const auto& [leaf, word] : leaf_words) {
        const LexEntry* e = lex.find(word);
        if (!e) throw UnknownWord("word '" + word + "' is not in the lexicon");
        env[leaf] = Value{e->spatial, e->spin};
    }
    return env;
}

// density matrix of a closed spatial result, normalized to unit trace
inline Mat normalized_matrix(const Tensor& t, cplx* raw_trace = nullptr) {
    Mat m = to_matrix(t);
    cplx tr = trace(m);
    if (raw_trace) *raw_trace = tr;
    if (std::abs(tr) < 1e-300) throw EvalError("spatial result has vanishing trace");
    return (1.0 / tr) * m;
}

// weighted mixture over readings: each contributes its normalized spatial
// density tensored with its spin state
inline Mat ambiguous_sum(const std::vector<Value>& readings, const std::vector<double>& weights) {
    if (readings.empty()) throw EvalError("ambiguous_sum: no readings");
    if (weights.size() != readings.size())
        throw LengthMismatch("ambiguous_sum: " + std::to_string(weights.size()) + " weights for " +
                             std::to_string(readings.size()) + " readings");
    Mat acc;
    for (size_t i = 0; i < readings.size(); ++i) {
        Mat block = kron(normalized_matrix(readings[i].spatial), readings[i].spin);
        Mat scaled = weights[i] * block;
        acc = i == 0 ? scaled : acc + scaled;
    }
    return acc;
}

// distinguishable alternative: readings side by side on orthogonal sectors
inline Mat direct_sum(const std::vector<Mat>& blocks) {
    int total = 0;
    for (const auto& b : blocks) total += b.n;
    Mat out(total);
    int off = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.n; ++i)
            for (int j = 0; j < b.n; ++j) out.at(off + i, off + j) = b.at(i, j);
        off += b.n;
    }
    return out;
}

} // namespace lambek
