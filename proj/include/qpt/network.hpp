#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpt/complex_matrix.hpp"
#include "qpt/errors.hpp"
#include "qpt/jacobi.hpp"

namespace qpt {

// Tight-binding network in the single-excitation sector: one on-site energy
// per site plus real symmetric hopping amplitudes between distinct sites.
struct NetworkParams {
    std::vector<double> site_energies;
    std::vector<std::vector<double>> couplings;

    std::size_t size() const noexcept { return site_energies.size(); }
};

struct HermitianOperator {
    CMatrix entries;

    std::size_t dim() const noexcept { return entries.rows(); }
};

// Energy eigenbasis. energies ascending; vectors holds orthonormal
// eigenvectors as columns with the deterministic phase convention from
// jacobi_eigensystem.
struct ExcitonDecomposition {
    std::vector<double> energies;
    CMatrix vectors;

    std::size_t dim() const noexcept { return energies.size(); }
};

inline void validate_network(const NetworkParams& p) {
    const std::size_t n = p.size();
    if (n < 2) throw ValidationError("network: need at least 2 sites");
    if (p.couplings.size() != n)
        throw ValidationError("network: couplings must be " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i)
        if (p.couplings[i].size() != n)
            throw ValidationError("network: couplings row " + std::to_string(i) +
                                  " must have " + std::to_string(n) + " entries");
    for (double e : p.site_energies)
        if (!std::isfinite(e)) throw ValidationError("network: site energy not finite");
    for (std::size_t i = 0; i < n; ++i) {
        if (p.couplings[i][i] != 0.0)
            throw ValidationError("network: coupling diagonal [" + std::to_string(i) + "][" +
                                  std::to_string(i) + "] must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(p.couplings[i][j]))
                throw ValidationError("network: coupling not finite");
            if (p.couplings[i][j] != p.couplings[j][i])
                throw ValidationError("network: couplings[" + std::to_string(i) + "][" +
                                      std::to_string(j) + "] != couplings[" + std::to_string(j) +
                                      "][" + std::to_string(i) + "]");
        }
    }
}

inline HermitianOperator build_hamiltonian(const NetworkParams& p) {
    validate_network(p);
    const std::size_t n = p.size();
    HermitianOperator h{CMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        h.entries(i, i) = p.site_energies[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            h.entries(i, j) = p.couplings[i][j];
            h.entries(j, i) = p.couplings[i][j];
        }
    }
    return h;
}

inline ExcitonDecomposition exciton_decomposition(const HermitianOperator& op) {
    if (op.entries.rows() != op.entries.cols())
        throw ValidationError("exciton_decomposition: operator must be square");
    if (op.entries.hermiticity_defect() > 1e-14)
        throw ValidationError("exciton_decomposition: operator is not Hermitian");
    EigenSystem es = jacobi_eigensystem(op.entries);
    return ExcitonDecomposition{std::move(es.values), std::move(es.vectors)};
}

} // namespace qpt
