#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpt/complex_matrix.hpp"
#include "qpt/errors.hpp"

namespace qpt {

// Eigenvalues ascending; vectors holds the matching orthonormal eigenvectors
// as columns, each re-phased so its largest-magnitude component is real >= 0
// (magnitude ties broken by lowest index).
struct EigenSystem {
    std::vector<double> values;
    CMatrix vectors;
};

namespace detail {

// One complex Jacobi rotation zeroing entry (p, q) of the Hermitian matrix a,
// accumulated into v. Both triangles of a are kept exactly Hermitian, so the
// convergence check may read the whole matrix.
inline void jacobi_rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q) {
    const Complex beta = a(p, q);
    const double r = std::abs(beta);
    if (r == 0.0) return;

    const Complex phase = beta / r;  // e^{i phi}
    const double alpha = a(p, p).real();
    const double gamma = a(q, q).real();

    // Smaller-angle root of tan(2 theta) = 2 r / (alpha - gamma).
    const double tau = (alpha - gamma) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        const Complex aip = a(i, p);
        const Complex aiq = a(i, q);
        const Complex nip = c * aip + s * std::conj(phase) * aiq;
        const Complex niq = -s * phase * aip + c * aiq;
        a(i, p) = nip;
        a(p, i) = std::conj(nip);
        a(i, q) = niq;
        a(q, i) = std::conj(niq);
    }
    a(p, p) = alpha * c * c + gamma * s * s + 2.0 * s * c * r;
    a(q, q) = alpha * s * s + gamma * c * c - 2.0 * s * c * r;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const Complex vip = v(i, p);
        const Complex viq = v(i, q);
        v(i, p) = c * vip + s * std::conj(phase) * viq;
        v(i, q) = -s * phase * vip + c * viq;
    }
}

inline void apply_phase_convention(CMatrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t imax = 0;
        double best = std::abs(v(0, k));
        for (std::size_t i = 1; i < n; ++i) {
            const double m = std::abs(v(i, k));
            if (m > best) {  // strict: magnitude ties keep the lowest index
                best = m;
                imax = i;
            }
        }
        if (best == 0.0) continue;
        const Complex scale = std::conj(v(imax, k)) / best;
        for (std::size_t i = 0; i < n; ++i) v(i, k) *= scale;
        v(imax, k) = Complex(best, 0.0);
    }
}

} // namespace detail

// Cyclic Jacobi diagonalization of a Hermitian matrix. Deterministic: fixed
// sweep order, no pivot search, so identical inputs give identical output
// bits. Converges when the off-diagonal Frobenius norm falls below
// 1e-14 * ||h||_F. Only the upper triangle and real(diagonal) are read.
inline EigenSystem jacobi_eigensystem(const CMatrix& h) {
    if (h.rows() != h.cols()) throw ValidationError("jacobi_eigensystem: matrix must be square");
    const std::size_t n = h.rows();
    if (n == 0) throw ValidationError("jacobi_eigensystem: empty matrix");
    if (n > 16) throw ValidationError("jacobi_eigensystem: dimension above 16 not supported");

    CMatrix a = h;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Complex(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    }
    CMatrix v = CMatrix::identity(n);

    const double target = 1e-14 * a.frobenius_norm();
    constexpr int max_sweeps = 60;
    int sweep = 0;
    while (a.off_diagonal_frobenius() > target) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("jacobi_eigensystem: no convergence after 60 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    detail::apply_phase_convention(out.vectors);
    return out;
}

} // namespace qpt
