#pragma once

// Dense complex matrices plus the small amount of linear algebra the rest of
// the library needs: Hermitian eigendecomposition (cyclic Jacobi), psd square
// roots, density-operator validation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace lambek {

using cplx = std::complex<double>;

inline double abs2(const cplx& c) { return std::real(c * std::conj(c)); }

struct Mat {
    int n = 0;
    std::vector<cplx> v; // row-major, n*n entries

    Mat() = default;
    explicit Mat(int dim) : n(dim), v(static_cast<size_t>(dim) * dim, cplx(0.0, 0.0)) {}

    cplx& at(int i, int j) { return v[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return v[static_cast<size_t>(i) * n + j]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline Mat operator+(const Mat& a, const Mat& b) {
    if (a.n != b.n) throw ShapeError("matrix sum: dimensions differ");
    Mat r(a.n);
    for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i] + b.v[i];
    return r;
}

inline Mat operator*(const cplx& s, const Mat& a) {
    Mat r(a.n);
    for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = s * a.v[i];
    return r;
}

inline Mat operator*(const Mat& a, const Mat& b) {
    if (a.n != b.n) throw ShapeError("matrix product: dimensions differ");
    Mat r(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            cplx aik = a.at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < a.n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

inline Mat adjoint(const Mat& a) {
    Mat r(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) r.at(j, i) = std::conj(a.at(i, j));
    return r;
}

inline cplx trace(const Mat& a) {
    cplx t(0.0, 0.0);
    for (int i = 0; i < a.n; ++i) t += a.at(i, i);
    return t;
}

// largest entrywise absolute difference
inline double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.n != b.n) throw ShapeError("matrix comparison: dimensions differ");
    double m = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

inline double hermiticity_defect(const Mat& a) {
    double m = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j <= i; ++j) m = std::max(m, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.n * b.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            for (int k = 0; k < b.n; ++k)
                for (int l = 0; l < b.n; ++l)
                    r.at(i * b.n + k, j * b.n + l) = a.at(i, j) * b.at(k, l);
    return r;
}

// eigensystem of a Hermitian matrix: a == vectors * diag(values) * vectors^dagger,
// column k of `vectors` is the eigenvector for values[k], values ascending
struct EigH {
    std::vector<double> values;
    Mat vectors;
};

// cyclic complex Jacobi; each pivot is annihilated by the exact unitary that
// diagonalizes its 2x2 Hermitian block
inline EigH eig_hermitian(Mat a, double off_tol = 1e-13, int max_sweeps = 100) {
    int n = a.n;
    Mat vec = Mat::identity(n);
    double scale = 0.0;
    for (const auto& x : a.v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
        if (off <= off_tol * scale) break;

        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                cplx beta = a.at(p, q);
                if (std::abs(beta) <= off_tol * scale * 1e-2) continue;

                // unit eigenvector (x, y) of [[alpha, beta], [conj(beta), gamma]]
                // for its larger eigenvalue; the partner column is (-conj(y), conj(x))
                double alpha = std::real(a.at(p, p));
                double gamma = std::real(a.at(q, q));
                double d = 0.5 * (alpha - gamma);
                double r = std::abs(beta);
                double s = std::hypot(d, r);
                cplx x, y;
                if (d >= 0.0) {
                    x = cplx(d + s, 0.0);
                    y = std::conj(beta);
                } else {
                    x = beta;
                    y = cplx(s - d, 0.0);
                }
                double nrm = std::sqrt(abs2(x) + abs2(y));
                x /= nrm;
                y /= nrm;

                // columns p,q of the full unitary are (x,y) and (-conj(y), conj(x))
                for (int k = 0; k < n; ++k) {
                    cplx akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = akp * x + akq * y;
                    a.at(k, q) = -akp * std::conj(y) + akq * std::conj(x);
                }
                for (int k = 0; k < n; ++k) {
                    cplx apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = std::conj(x) * apk + std::conj(y) * aqk;
                    a.at(q, k) = -y * apk + x * aqk;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    cplx vkp = vec.at(k, p), vkq = vec.at(k, q);
                    vec.at(k, p) = vkp * x + vkq * y;
                    vec.at(k, q) = -vkp * std::conj(y) + vkq * std::conj(x);
                }
            }
    }

    EigH e;
    e.values.resize(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = std::real(a.at(i, i));
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });
    e.vectors = Mat(n);
    for (int c = 0; c < n; ++c) {
        e.values[c] = diag[order[c]];
        for (int k = 0; k < n; ++k) e.vectors.at(k, c) = vec.at(k, order[c]);
    }
    return e;
}

// square root of a psd matrix; eigenvalues in [-neg_tol, 0) are clamped to 0,
// anything lower is rejected
inline Mat psd_sqrt(const Mat& a, double neg_tol = 1e-8) {
    EigH e = eig_hermitian(a);
    Mat r(a.n);
    for (int k = 0; k < a.n; ++k) {
        double lam = e.values[k];
        if (lam < -neg_tol)
            throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(lam) + " below -" + std::to_string(neg_tol));
        if (lam < 0.0) lam = 0.0;
        double s = std::sqrt(lam);
        if (s == 0.0) continue;
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j)
                r.at(i, j) += s * e.vectors.at(i, k) * std::conj(e.vectors.at(j, k));
    }
    return r;
}

// checks hermiticity, spectrum and unit trace of a density operator
inline void validate_density(const Mat& a, double tol = 1e-10) {
    if (a.n <= 0 || a.v.size() != static_cast<size_t>(a.n) * a.n)
        throw DensityViolation("density check: not a square matrix");
    double h = hermiticity_defect(a);
    if (h > tol)
        throw DensityViolation("density check: hermiticity defect " + std::to_string(h));
    cplx tr = trace(a);
    if (std::abs(tr - cplx(1.0, 0.0)) > tol)
        throw DensityViolation("density check: trace " + std::to_string(std::real(tr)) + "+" +
                               std::to_string(std::imag(tr)) + "i is not 1");
    EigH e = eig_hermitian(a);
    if (!e.values.empty() && e.values.front() < -tol)
        throw DensityViolation("density check: negative eigenvalue " + std::to_string(e.values.front()));
}

inline bool is_density(const Mat& a, double tol = 1e-10) {
    try {
        validate_density(a, tol);
        return true;
    } catch (const DensityViolation&) {
        return false;
    }
}

} // namespace lambek
