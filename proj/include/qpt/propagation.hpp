#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qpt/complex_matrix.hpp"
#include "qpt/errors.hpp"
#include "qpt/network.hpp"

namespace qpt {

struct PureState {
    CVector amplitudes;

    std::size_t dim() const noexcept { return amplitudes.size(); }
};

inline PureState make_pure_state(CVector amplitudes) {
    if (amplitudes.empty()) throw ValidationError("pure state: empty amplitude vector");
    const double n = norm2(amplitudes);
    if (std::fabs(n - 1.0) > 1e-12)
        throw ValidationError("pure state: amplitudes must have unit 2-norm");
    return PureState{std::move(amplitudes)};
}

inline PureState site_basis_state(std::size_t dim, std::size_t site) {
    if (site >= dim) throw ValidationError("site_basis_state: site index out of range");
    CVector a(dim, Complex(0.0, 0.0));
    a[site] = 1.0;
    return PureState{std::move(a)};
}

// Uniform sampling grid t_k = k * dt for k = 0..count-1. The count is
// floor(t_max / dt) + 1 with a tiny nudge so that an exact multiple of dt
// is not lost to division noise.
struct TimeGrid {
    double t_max = 0.0;
    double dt = 0.0;
    std::size_t count = 0;

    TimeGrid() = default;

    TimeGrid(double t_max_, double dt_) : t_max(t_max_), dt(dt_) {
        if (!(dt > 0.0)) throw ValidationError("time grid: dt must be > 0");
        if (!(t_max > 0.0)) throw ValidationError("time grid: t_max must be > 0");
        if (dt > t_max) throw ValidationError("time grid: dt must not exceed t_max");
        count = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
    }

    double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
};

// Evolve a pure state for time t through the spectral form of U(t):
// apply e^{-i E_k t} to each exciton amplitude. No integrator is involved,
// so the result at large t is as accurate as at small t.
inline PureState propagate(const ExcitonDecomposition& decomp, const PureState& state, double t) {
    if (state.dim() != decomp.dim())
        throw ValidationError("propagate: state dimension does not match decomposition");
    if (!std::isfinite(t)) throw ValidationError("propagate: time must be finite");
    const double n = norm2(state.amplitudes);
    if (std::fabs(n - 1.0) > 1e-12)
        throw ValidationError("propagate: state must have unit 2-norm");
    if (t == 0.0) return state;

    CVector modal = adjoint_apply(decomp.vectors, state.amplitudes);
    for (std::size_t k = 0; k < modal.size(); ++k) {
        const double ph = -decomp.energies[k] * t;
        modal[k] *= Complex(std::cos(ph), std::sin(ph));
    }
    return PureState{decomp.vectors * modal};
}

// Site amplitudes and their moduli on a full time grid, starting from one
// occupied site. Row 0 is the start state itself, exactly.
struct Trajectory {
    TimeGrid grid;
    std::size_t start_site = 0;
    std::vector<CVector> amplitudes;          // count rows of dim entries
    std::vector<std::vector<double>> moduli;  // |amplitude| per row

    std::size_t dim() const noexcept { return amplitudes.empty() ? 0 : amplitudes[0].size(); }
};

inline Trajectory trajectory(const ExcitonDecomposition& decomp, std::size_t start_site,
                             const TimeGrid& grid) {
    const std::size_t d = decomp.dim();
    if (start_site >= d) throw ValidationError("trajectory: start site out of range");
    if (grid.count == 0) throw ValidationError("trajectory: empty time grid");

    Trajectory traj;
    traj.grid = grid;
    traj.start_site = start_site;
    traj.amplitudes.reserve(grid.count);
    traj.moduli.reserve(grid.count);

    const CVector modal0 = adjoint_apply(decomp.vectors, site_basis_state(d, start_site).amplitudes);
    CVector modal(d);
    for (std::size_t k = 0; k < grid.count; ++k) {
        if (k == 0) {
            traj.amplitudes.push_back(site_basis_state(d, start_site).amplitudes);
        } else {
            const double t = grid.time(k);
            for (std::size_t m = 0; m < d; ++m) {
                const double ph = -decomp.energies[m] * t;
                modal[m] = modal0[m] * Complex(std::cos(ph), std::sin(ph));
            }
            traj.amplitudes.push_back(decomp.vectors * modal);
        }
        std::vector<double> f(d);
        for (std::size_t i = 0; i < d; ++i) f[i] = std::abs(traj.amplitudes.back()[i]);
        traj.moduli.push_back(std::move(f));
    }
    return traj;
}

inline CMatrix density_matrix(const PureState& state) {
    const double n = norm2(state.amplitudes);
    if (std::fabs(n - 1.0) > 1e-12)
        throw ValidationError("density_matrix: state must have unit 2-norm");
    const std::size_t d = state.dim();
    CMatrix rho(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            rho(i, j) = state.amplitudes[i] * std::conj(state.amplitudes[j]);
    return rho;
}

} // namespace qpt
