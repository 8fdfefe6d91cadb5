#pragma once

// Operations on the auxiliary spin space that tracks derivational ambiguity.
// Levels are counted from the bottom: level a is the basis vector with a 1 in
// row L-1-a, so for L=2 the vector |0> is (0,1)^T and |1> is (1,0)^T.

#include <vector>

#include "linalg.hpp"

namespace lambek {

constexpr double kDegenerateTraceTol = 1e-12;

inline int level_row(int levels, int a) { return levels - 1 - a; }

// |a><a|
inline Mat basis_projector(int levels, int a) {
    if (a < 0 || a >= levels) throw ShapeError("basis_projector: level out of range");
    Mat p(levels);
    p.at(level_row(levels, a), level_row(levels, a)) = 1.0;
    return p;
}

// sum_a |a+1><a|, ones on the superdiagonal in row/column coordinates
inline Mat raising_op(int levels) {
    Mat s(levels);
    for (int a = 0; a + 1 < levels; ++a)
        s.at(level_row(levels, a + 1), level_row(levels, a)) = 1.0;
    return s;
}

// measurement update: sqrt(u) t sqrt(u), renormalized; u plays the role of
// the measuring operator, t the state being measured
inline Mat star(const Mat& t, const Mat& u) {
    if (t.n != u.n) throw ShapeError("star: operand dimensions differ");
    Mat ru = psd_sqrt(u);
    Mat s = ru * t * ru;
    cplx tr = trace(s);
    if (std::abs(tr) <= kDegenerateTraceTol)
        throw DegenerateMeasurement("star: post-measurement trace is zero");
    return (cplx(1.0, 0.0) / tr) * s;
}

// climb n levels with the raising operator, renormalizing after each step
inline Mat raise_level(Mat rho, int n) {
    Mat s = raising_op(rho.n);
    Mat sd = adjoint(s);
    for (int step = 0; step < n; ++step) {
        Mat r = s * rho * sd;
        cplx tr = trace(r);
        if (std::abs(tr) <= kDegenerateTraceTol)
            throw LadderOverflow("raise_level: no support below the top level at step " +
                                 std::to_string(step + 1));
        rho = (cplx(1.0, 0.0) / tr) * r;
    }
    return rho;
}

// weighted mixture of projective measurements in the level basis; the default
// weight vector (1, 0, ..., 0) collapses onto level 0
inline Mat project_box(const Mat& rho, const std::vector<double>& weights = {}) {
    std::vector<double> w = weights;
    if (w.empty()) {
        w.assign(static_cast<size_t>(rho.n), 0.0);
        w[0] = 1.0;
    }
    if (static_cast<int>(w.size()) != rho.n)
        throw LengthMismatch("project_box: " + std::to_string(w.size()) + " weights for " +
                             std::to_string(rho.n) + " levels");
    Mat out(rho.n);
    bool any = false;
    for (int a = 0; a < rho.n; ++a) {
        if (w[a] == 0.0) continue;
        out = out + cplx(w[a], 0.0) * star(rho, basis_projector(rho.n, a));
        any = true;
    }
    if (!any) throw DegenerateMeasurement("project_box: all weights are zero");
    return out;
}

// conjugation by a chain of unitaries; the default empty chain is the identity
inline Mat evolve_dia(Mat rho, const std::vector<Mat>& unitaries = {}) {
    for (const auto& u : unitaries) {
        if (u.n != rho.n) throw ShapeError("evolve_dia: unitary dimension mismatch");
        rho = u * rho * adjoint(u);
    }
    return rho;
}

} // namespace lambek
