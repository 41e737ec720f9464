#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "qpt/complex_matrix.hpp"
#include "qpt/errors.hpp"
#include "qpt/jacobi.hpp"
#include "qpt/network.hpp"

namespace qpt {

enum class Measure { l1, reoc };
enum class BasisKind { site, exciton };

// Basis the coherence is measured in. The exciton choice carries the
// decomposition whose eigenvectors define the basis.
struct BasisChoice {
    BasisKind kind = BasisKind::site;
    std::optional<ExcitonDecomposition> decomposition;

    static BasisChoice site() { return BasisChoice{BasisKind::site, std::nullopt}; }
    static BasisChoice exciton(ExcitonDecomposition d) {
        return BasisChoice{BasisKind::exciton, std::move(d)};
    }
};

struct CoherenceValue {
    double l1 = 0.0;
    double reoc = 0.0;
};

// Entropy of a probability vector in bits, with 0 log 0 = 0. Entries may
// carry eigensolver noise: anything in [-1e-9, 0) is clamped to zero, and
// anything below that is rejected.
inline double shannon_bits(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs) {
        if (p < -1e-9) throw ValidationError("shannon_bits: negative probability");
        if (p <= 0.0) continue;
        s -= p * std::log2(p);
    }
    return s;
}

inline double binary_entropy(double x) {
    const double probs[2] = {x, 1.0 - x};
    return shannon_bits(probs);
}

namespace detail {

inline void check_density_matrix(const CMatrix& rho, const char* who) {
    if (rho.rows() != rho.cols()) throw ValidationError(std::string(who) + ": matrix must be square");
    if (rho.rows() < 2) throw ValidationError(std::string(who) + ": dimension must be >= 2");
    if (rho.hermiticity_defect() > 1e-10)
        throw ValidationError(std::string(who) + ": matrix is not Hermitian");
    Complex tr(0.0, 0.0);
    for (std::size_t i = 0; i < rho.rows(); ++i) tr += rho(i, i);
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-10)
        throw ValidationError(std::string(who) + ": trace must be 1");
}

inline CMatrix to_basis(const CMatrix& rho, const BasisChoice& basis, const char* who) {
    if (basis.kind == BasisKind::site) return rho;
    if (!basis.decomposition)
        throw ValidationError(std::string(who) + ": exciton basis requires a decomposition");
    const CMatrix& v = basis.decomposition->vectors;
    if (v.rows() != rho.rows())
        throw ValidationError(std::string(who) + ": decomposition dimension mismatch");
    return v.adjoint() * rho * v;
}

} // namespace detail

// Sum of off-diagonal magnitudes, 2 * sum_{i<j} |rho_ij|, in the chosen basis.
inline double l1_coherence(const CMatrix& rho, const BasisChoice& basis) {
    detail::check_density_matrix(rho, "l1_coherence");
    const CMatrix r = detail::to_basis(rho, basis, "l1_coherence");
    double s = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = i + 1; j < r.cols(); ++j) s += std::abs(r(i, j));
    return 2.0 * s;
}

inline double von_neumann_entropy_bits(const CMatrix& rho) {
    const EigenSystem es = jacobi_eigensystem(rho);
    return shannon_bits(es.values);
}

// Relative entropy of coherence: S(diag(rho)) - S(rho) in bits, in the
// chosen basis. Non-negative up to rounding; tiny negative results are
// clamped to zero.
inline double reoc(const CMatrix& rho, const BasisChoice& basis) {
    detail::check_density_matrix(rho, "reoc");
    const CMatrix r = detail::to_basis(rho, basis, "reoc");
    std::vector<double> diag(r.rows());
    for (std::size_t i = 0; i < r.rows(); ++i) diag[i] = r(i, i).real();
    const double value = shannon_bits(diag) - von_neumann_entropy_bits(r);
    return value > 0.0 ? value : 0.0;
}

// Coherence shared by one pair of sites in the single-excitation sector.
// Tracing out all other sites leaves a two-qubit state whose only
// off-diagonal element is rho_ij, so the pair coherence is 2 |rho_ij|
// (equal to the pair's concurrence).
inline double local_pair_coherence(const CMatrix& rho_site, std::size_t i, std::size_t j) {
    detail::check_density_matrix(rho_site, "local_pair_coherence");
    if (i == j) throw ValidationError("local_pair_coherence: site indices must differ");
    if (i >= rho_site.rows() || j >= rho_site.rows())
        throw ValidationError("local_pair_coherence: site index out of range");
    return 2.0 * std::abs(rho_site(i, j));
}

// Values both measures take on a maximally coherent state of dimension d:
// the l1 norm reaches d - 1 and the relative entropy reaches log2(d).
struct CoherenceBounds {
    double l1 = 0.0;
    double reoc = 0.0;
};

inline CoherenceBounds mcs_bounds(std::size_t d) {
    if (d < 2) throw ValidationError("mcs_bounds: dimension must be >= 2");
    return CoherenceBounds{static_cast<double>(d - 1), std::log2(static_cast<double>(d))};
}

// Fast paths for pure states, where S(rho) = 0 and rho_ij = c_i conj(c_j):
// both measures depend only on the amplitude moduli.
inline double pure_l1_from_moduli(std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j) s += f[i] * f[j];
    return 2.0 * s;
}

inline double pure_reoc_from_moduli(std::span<const double> f) {
    double s = 0.0;
    for (double m : f) {
        const double p = m * m;
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

} // namespace qpt
