#pragma once

// Labeled operator tensors. A tensor carries one slot per signature factor;
// each slot contributes an adjacent (ket, bra) axis pair, so a tensor over k
// factors is an operator on the k-fold composite space. Slots tagged with an
// owner are open: they stand for the not-yet-discharged axes of a
// lambda-bound variable and ride through contractions until the binder
// converts them into real dual factors.

#include <string>
#include <vector>

#include "formula.hpp"
#include "linalg.hpp"

namespace lambek {

struct Slot {
    Space space;
    bool dual = false;
    std::string owner; // empty for a positional slot
};

inline bool operator==(const Slot& a, const Slot& b) {
    return a.space == b.space && a.dual == b.dual && a.owner == b.owner;
}

inline std::string slot_name(const Slot& s) {
    std::string out = space_name(s.space);
    if (s.dual) out += "*";
    if (!s.owner.empty()) out += "?" + s.owner;
    return out;
}

// per-space metric threaded through explicit-sum contraction; identity by default
struct Metric {
    Mat n, s;

    explicit Metric(const Dims& d = Dims{}) : n(Mat::identity(d.n)), s(Mat::identity(d.s)) {}

    const Mat& get(Space sp) const {
        switch (sp) {
            case Space::N: return n;
            case Space::S: return s;
            default: throw ShapeError("metric: no spatial metric on the spin space");
        }
    }
};

struct Tensor {
    Dims dims;
    std::vector<Slot> slots;
    std::vector<cplx> data; // row-major over axes (k0, b0, k1, b1, ...)

    int slot_dim(size_t i) const { return dims.dim(slots[i].space); }

    size_t size() const {
        size_t n = 1;
        for (size_t i = 0; i < slots.size(); ++i) {
            size_t d = static_cast<size_t>(slot_dim(i));
            n *= d * d;
        }
        return n;
    }

    size_t flat(const std::vector<int>& kets, const std::vector<int>& bras) const {
        size_t idx = 0;
        for (size_t i = 0; i < slots.size(); ++i) {
            size_t d = static_cast<size_t>(slot_dim(i));
            idx = (idx * d + kets[i]) * d + bras[i];
        }
        return idx;
    }

    size_t real_count() const {
        size_t n = 0;
        while (n < slots.size() && slots[n].owner.empty()) ++n;
        return n;
    }

    bool has_open() const { return real_count() != slots.size(); }
};

inline Tensor make_tensor(const Dims& dims, std::vector<Slot> slots) {
    Tensor t;
    t.dims = dims;
    t.slots = std::move(slots);
    t.data.assign(t.size(), cplx(0.0, 0.0));
    return t;
}

inline std::vector<Slot> slots_of(const Signature& sig, const std::string& owner = "") {
    std::vector<Slot> out;
    out.reserve(sig.size());
    for (const auto& f : sig) out.push_back(Slot{f.space, f.dual, owner});
    return out;
}

inline std::string slots_name(const std::vector<Slot>& slots) {
    std::string out;
    for (size_t i = 0; i < slots.size(); ++i) {
        if (i) out += " ";
        out += slot_name(slots[i]);
    }
    return out;
}

// steps every counter vector over the given dims like an odometer
inline bool advance(std::vector<int>& idx, const std::vector<int>& dims) {
    for (size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < dims[i]) return true;
        idx[i] = 0;
    }
    return false;
}

// ---- conversions -----------------------------------------------------------

// matrix view of a fully positional tensor over the composite space
inline Mat to_matrix(const Tensor& t) {
    if (t.has_open()) throw SlotMismatch("to_matrix: tensor still has open slots");
    int total = 1;
    for (size_t i = 0; i < t.slots.size(); ++i) total *= t.slot_dim(i);
    Mat m(total);
    size_t k = t.slots.size();
    std::vector<int> kets(k, 0), bras(k, 0), dims(k);
    for (size_t i = 0; i < k; ++i) dims[i] = t.slot_dim(i);
    std::vector<int> all(2 * k, 0);
    std::vector<int> alldims(2 * k);
    for (size_t i = 0; i < k; ++i) alldims[2 * i] = alldims[2 * i + 1] = dims[i];
    do {
        int K = 0, B = 0;
        for (size_t i = 0; i < k; ++i) {
            K = K * dims[i] + all[2 * i];
            B = B * dims[i] + all[2 * i + 1];
            kets[i] = all[2 * i];
            bras[i] = all[2 * i + 1];
        }
        m.at(K, B) = t.data[t.flat(kets, bras)];
    } while (advance(all, alldims));
    return m;
}

inline Tensor from_matrix(const Mat& m, const Signature& sig, const Dims& dims) {
    Tensor t = make_tensor(dims, slots_of(sig));
    int total = 1;
    for (size_t i = 0; i < t.slots.size(); ++i) total *= t.slot_dim(i);
    if (m.n != total)
        throw SignatureMismatch("matrix of dimension " + std::to_string(m.n) +
                                " does not fit signature [" + signature_name(sig) +
                                "] of composite dimension " + std::to_string(total));
    size_t k = t.slots.size();
    std::vector<int> kets(k, 0), bras(k, 0), dvec(k);
    for (size_t i = 0; i < k; ++i) dvec[i] = t.slot_dim(i);
    std::vector<int> all(2 * k, 0);
    std::vector<int> alldims(2 * k);
    for (size_t i = 0; i < k; ++i) alldims[2 * i] = alldims[2 * i + 1] = dvec[i];
    do {
        int K = 0, B = 0;
        for (size_t i = 0; i < k; ++i) {
            K = K * dvec[i] + all[2 * i];
            B = B * dvec[i] + all[2 * i + 1];
            kets[i] = all[2 * i];
            bras[i] = all[2 * i + 1];
        }
        t.data[t.flat(kets, bras)] = m.at(K, B);
    } while (advance(all, alldims));
    return t;
}

inline cplx tensor_trace(const Tensor& t) { return trace(to_matrix(t)); }

// delta tensor standing in for a lambda-bound variable: positional slots for
// the variable's data signature, plus an owned open twin for each of them
inline Tensor bound_var_tensor(const Signature& data_sig, const std::string& owner, const Dims& dims) {
    std::vector<Slot> slots = slots_of(data_sig);
    std::vector<Slot> opens = slots_of(data_sig, owner);
    slots.insert(slots.end(), opens.begin(), opens.end());
    Tensor t = make_tensor(dims, std::move(slots));
    size_t m = data_sig.size();
    std::vector<int> kets(2 * m, 0), bras(2 * m, 0);
    std::vector<int> half(2 * m, 0), halfdims(2 * m);
    for (size_t i = 0; i < m; ++i)
        halfdims[2 * i] = halfdims[2 * i + 1] = t.slot_dim(i);
    do {
        for (size_t i = 0; i < m; ++i) {
            kets[i] = kets[m + i] = half[2 * i];
            bras[i] = bras[m + i] = half[2 * i + 1];
        }
        t.data[t.flat(kets, bras)] = 1.0;
    } while (advance(half, halfdims));
    return t;
}

// ---- contraction -----------------------------------------------------------
//
// Contracting a slot pair matches a's ket with b's bra and a's bra with b's
// ket:  sum_{u,w} a[..(u,w)..] b[..(w,u)..].  With a metric the sums are
// materialized with two metric factors per pair:
//   sum_{i,i',j,j'} a[..(i,i')..] M[i',j'] b[..(j',j)..] M[j,i]

inline Tensor contract(const Tensor& a, const Tensor& b,
                       const std::vector<std::pair<size_t, size_t>>& pairs,
                       const Metric* metric = nullptr) {
    std::vector<bool> a_used(a.slots.size(), false), b_used(b.slots.size(), false);
    for (auto [ai, bi] : pairs) {
        if (ai >= a.slots.size() || bi >= b.slots.size())
            throw SlotMismatch("contract: slot index out of range");
        const Slot& sa = a.slots[ai];
        const Slot& sb = b.slots[bi];
        if (!sa.owner.empty() || !sb.owner.empty())
            throw SlotMismatch("contract: cannot contract an open slot");
        if (sa.space != sb.space || sa.dual == sb.dual)
            throw SlotMismatch("contract: slot " + slot_name(sa) + " does not match dual slot " +
                               slot_name(sb));
        if (a_used[ai] || b_used[bi]) throw SlotMismatch("contract: slot used twice");
        a_used[ai] = true;
        b_used[bi] = true;
    }

    std::vector<Slot> out_slots;
    std::vector<size_t> out_from_a, out_from_b;
    for (size_t i = 0; i < a.slots.size(); ++i)
        if (!a_used[i]) {
            out_from_a.push_back(i);
            out_slots.push_back(a.slots[i]);
        }
    for (size_t i = 0; i < b.slots.size(); ++i)
        if (!b_used[i]) {
            out_from_b.push_back(i);
            out_slots.push_back(b.slots[i]);
        }

    Tensor out = make_tensor(a.dims, std::move(out_slots));

    size_t ka = a.slots.size(), kb = b.slots.size(), ko = out.slots.size();
    std::vector<int> a_k(ka), a_b(ka), b_k(kb), b_b(kb);
    std::vector<int> oidx(2 * ko, 0), odims(2 * ko);
    for (size_t i = 0; i < ko; ++i) odims[2 * i] = odims[2 * i + 1] = out.slot_dim(i);
    std::vector<int> okets(ko), obras(ko);

    // contracted index block: 2 indices per pair without metric, 4 with
    size_t per = metric ? 4 : 2;
    std::vector<int> cidx(per * pairs.size(), 0), cdims(per * pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) {
        int d = a.dims.dim(a.slots[pairs[p].first].space);
        for (size_t q = 0; q < per; ++q) cdims[per * p + q] = d;
    }

    do {
        for (size_t i = 0; i < ko; ++i) {
            okets[i] = oidx[2 * i];
            obras[i] = oidx[2 * i + 1];
        }
        cplx sum(0.0, 0.0);
        std::fill(cidx.begin(), cidx.end(), 0);
        do {
            for (size_t i = 0; i < out_from_a.size(); ++i) {
                a_k[out_from_a[i]] = okets[i];
                a_b[out_from_a[i]] = obras[i];
            }
            for (size_t i = 0; i < out_from_b.size(); ++i) {
                b_k[out_from_b[i]] = okets[out_from_a.size() + i];
                b_b[out_from_b[i]] = obras[out_from_a.size() + i];
            }
            cplx factor(1.0, 0.0);
            for (size_t p = 0; p < pairs.size(); ++p) {
                auto [ai, bi] = pairs[p];
                if (!metric) {
                    int u = cidx[2 * p], w = cidx[2 * p + 1];
                    a_k[ai] = u;
                    a_b[ai] = w;
                    b_k[bi] = w;
                    b_b[bi] = u;
                } else {
                    int i = cidx[4 * p], i2 = cidx[4 * p + 1], j = cidx[4 * p + 2], j2 = cidx[4 * p + 3];
                    a_k[ai] = i;
                    a_b[ai] = i2;
                    b_k[bi] = j2;
                    b_b[bi] = j;
                    const Mat& m = metric->get(a.slots[ai].space);
                    factor *= m.at(i2, j2) * m.at(j, i);
                }
            }
            sum += factor * a.data[a.flat(a_k, a_b)] * b.data[b.flat(b_k, b_b)];
        } while (advance(cidx, cdims));
        out.data[out.flat(okets, obras)] = sum;
    } while (advance(oidx, odims));

    return out;
}

// ---- application ------------------------------------------------------------
//
// Function tensors consume a whole argument: the trailing positional slots
// for forward application t <| u, the leading ones for backward u |> t. In
// both cases the function's consumed block must be the dual of the argument's
// positional slots in reverse order.

namespace detail {
inline std::vector<std::pair<size_t, size_t>> application_pairs(const Tensor& fn, const Tensor& arg,
                                                                bool leading) {
    size_t m = arg.real_count();
    size_t fn_real = fn.real_count();
    if (arg.real_count() == 0) throw SlotMismatch("application: argument has no positional slots");
    if (fn_real < m)
        throw SlotMismatch("application: function with slots [" + slots_name(fn.slots) +
                           "] cannot consume argument with slots [" + slots_name(arg.slots) + "]");
    size_t start = leading ? 0 : fn_real - m;
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < m; ++i) {
        const Slot& fs = fn.slots[start + i];
        const Slot& as = arg.slots[m - 1 - i];
        if (fs.space != as.space || fs.dual == as.dual)
            throw SlotMismatch("application: function slots [" + slots_name(fn.slots) +
                               "] do not match argument slots [" + slots_name(arg.slots) + "]");
        pairs.emplace_back(start + i, m - 1 - i);
    }
    return pairs;
}
} // namespace detail

// forward application t <| u
inline Tensor apply_forward(const Tensor& fn, const Tensor& arg, const Metric* metric = nullptr) {
    return contract(fn, arg, detail::application_pairs(fn, arg, false), metric);
}

// backward application u |> t
inline Tensor apply_backward(const Tensor& arg, const Tensor& fn, const Metric* metric = nullptr) {
    return contract(fn, arg, detail::application_pairs(fn, arg, true), metric);
}

// ---- binder discharge ---------------------------------------------------------
//
// Closing a binder turns the owner's open slots into real dual factors: the
// factor order is reversed, the dual flag flipped, and the ket/bra axes
// swapped. For a left lambda the converted block is prepended to the
// positional slots, for a right lambda appended.

inline Tensor close_binder(const Tensor& t, const std::string& owner, bool left) {
    std::vector<size_t> owned;
    std::vector<size_t> kept;
    for (size_t i = 0; i < t.slots.size(); ++i) {
        if (t.slots[i].owner == owner)
            owned.push_back(i);
        else
            kept.push_back(i);
    }
    if (owned.empty()) throw SlotMismatch("close_binder: no open slots owned by '" + owner + "'");

    // new slot order: [converted? reals ...] with remaining opens last
    std::vector<size_t> src;            // source slot index per new slot
    std::vector<bool> swapped;          // whether the source axes are (bra, ket)
    std::vector<Slot> new_slots;
    auto push_converted = [&]() {
        for (size_t i = owned.size(); i-- > 0;) {
            const Slot& s = t.slots[owned[i]];
            new_slots.push_back(Slot{s.space, !s.dual, ""});
            src.push_back(owned[i]);
            swapped.push_back(true);
        }
    };
    size_t real_kept = 0;
    while (real_kept < kept.size() && t.slots[kept[real_kept]].owner.empty()) ++real_kept;
    if (left) push_converted();
    for (size_t i = 0; i < real_kept; ++i) {
        new_slots.push_back(t.slots[kept[i]]);
        src.push_back(kept[i]);
        swapped.push_back(false);
    }
    if (!left) push_converted();
    for (size_t i = real_kept; i < kept.size(); ++i) {
        new_slots.push_back(t.slots[kept[i]]);
        src.push_back(kept[i]);
        swapped.push_back(false);
    }

    Tensor out = make_tensor(t.dims, std::move(new_slots));
    size_t k = out.slots.size();
    std::vector<int> oidx(2 * k, 0), odims(2 * k);
    for (size_t i = 0; i < k; ++i) odims[2 * i] = odims[2 * i + 1] = out.slot_dim(i);
    std::vector<int> okets(k), obras(k), skets(k), sbras(k);
    do {
        for (size_t i = 0; i < k; ++i) {
            okets[i] = oidx[2 * i];
            obras[i] = oidx[2 * i + 1];
        }
        for (size_t i = 0; i < k; ++i) {
            if (swapped[i]) {
                skets[src[i]] = obras[i];
                sbras[src[i]] = okets[i];
            } else {
                skets[src[i]] = okets[i];
                sbras[src[i]] = obras[i];
            }
        }
        out.data[out.flat(okets, obras)] = t.data[t.flat(skets, sbras)];
    } while (advance(oidx, odims));
    return out;
}

// largest entrywise difference; slots must agree exactly
inline double tensor_max_diff(const Tensor& a, const Tensor& b) {
    if (a.slots.size() != b.slots.size()) throw SlotMismatch("tensor comparison: slot counts differ");
    for (size_t i = 0; i < a.slots.size(); ++i)
        if (!(a.slots[i] == b.slots[i]))
            throw SlotMismatch("tensor comparison: slot " + std::to_string(i) + " differs");
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

} // namespace lambek
