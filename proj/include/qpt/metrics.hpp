#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qpt/coherence.hpp"
#include "qpt/errors.hpp"
#include "qpt/propagation.hpp"

namespace qpt {

// Population-transfer record for one target site: |<target|psi(t)>| per
// sample, its maximum, and the earliest time attaining it.
struct TransferReport {
    std::vector<double> fidelity;
    double f_max = 0.0;
    double t_at_max = 0.0;
    bool perfect = false;
};

inline TransferReport fidelity_series(const Trajectory& traj, std::size_t target_site,
                                      double perfect_tol = 1e-6) {
    if (target_site >= traj.dim())
        throw ValidationError("fidelity_series: target site out of range");
    TransferReport rep;
    rep.fidelity.resize(traj.grid.count);
    for (std::size_t k = 0; k < traj.grid.count; ++k) {
        const double f = traj.moduli[k][target_site];
        rep.fidelity[k] = f;
        if (f > rep.f_max) {  // strict: ties keep the earliest time
            rep.f_max = f;
            rep.t_at_max = traj.grid.time(k);
        }
    }
    rep.perfect = rep.f_max >= 1.0 - perfect_tol;
    return rep;
}

// Running time average (1/t) int_0^t y dt' of a sampled series by the
// composite trapezoid rule. Entry 0 is defined as y[0].
inline std::vector<double> running_time_average(const std::vector<double>& y,
                                                const TimeGrid& grid) {
    if (y.size() != grid.count)
        throw ValidationError("running_time_average: series length does not match grid");
    std::vector<double> avg(y.size());
    if (y.empty()) return avg;
    avg[0] = y[0];
    double integral = 0.0;
    for (std::size_t k = 1; k < y.size(); ++k) {
        integral += 0.5 * grid.dt * (y[k - 1] + y[k]);
        avg[k] = integral / grid.time(k);
    }
    return avg;
}

// Time-local coherence of a pure trajectory plus its running time average.
struct CoherenceSeries {
    TimeGrid grid;
    Measure measure = Measure::l1;
    BasisKind basis = BasisKind::site;
    std::vector<double> tlc;  // coherence at each sample
    std::vector<double> tac;  // running time average, tac[0] == tlc[0]
};

inline CoherenceSeries coherence_series(const Trajectory& traj, Measure measure,
                                        const BasisChoice& basis) {
    if (traj.grid.count == 0 || traj.amplitudes.empty())
        throw ValidationError("coherence_series: empty trajectory");
    if (basis.kind == BasisKind::exciton) {
        if (!basis.decomposition)
            throw ValidationError("coherence_series: exciton basis requires a decomposition");
        if (basis.decomposition->dim() != traj.dim())
            throw ValidationError("coherence_series: decomposition dimension mismatch");
    }

    CoherenceSeries series;
    series.grid = traj.grid;
    series.measure = measure;
    series.basis = basis.kind;
    series.tlc.resize(traj.grid.count);

    const std::size_t d = traj.dim();
    std::vector<double> f(d);
    for (std::size_t k = 0; k < traj.grid.count; ++k) {
        if (basis.kind == BasisKind::site) {
            series.tlc[k] = (measure == Measure::l1)
                                ? pure_l1_from_moduli(traj.moduli[k])
                                : pure_reoc_from_moduli(traj.moduli[k]);
        } else {
            const CVector modal = adjoint_apply(basis.decomposition->vectors, traj.amplitudes[k]);
            for (std::size_t i = 0; i < d; ++i) f[i] = std::abs(modal[i]);
            series.tlc[k] =
                (measure == Measure::l1) ? pure_l1_from_moduli(f) : pure_reoc_from_moduli(f);
        }
    }
    series.tac = running_time_average(series.tlc, traj.grid);
    return series;
}

// Coherence held by one site pair along a trajectory: 2 f_i f_j per sample,
// with the same running-average convention as CoherenceSeries.
struct PairCoherenceSeries {
    TimeGrid grid;
    std::size_t site_i = 0, site_j = 0;
    std::vector<double> tlc;
    std::vector<double> tac;
};

inline PairCoherenceSeries pair_coherence_series(const Trajectory& traj, std::size_t i,
                                                 std::size_t j) {
    if (i == j) throw ValidationError("pair_coherence_series: site indices must differ");
    if (i >= traj.dim() || j >= traj.dim())
        throw ValidationError("pair_coherence_series: site index out of range");
    PairCoherenceSeries series;
    series.grid = traj.grid;
    series.site_i = i;
    series.site_j = j;
    series.tlc.resize(traj.grid.count);
    for (std::size_t k = 0; k < traj.grid.count; ++k)
        series.tlc[k] = 2.0 * traj.moduli[k][i] * traj.moduli[k][j];
    series.tac = running_time_average(series.tlc, traj.grid);
    return series;
}

// Maximum of the running time average and the earliest time attaining it.
inline std::pair<double, double> max_tac(const CoherenceSeries& series) {
    double best = series.tac[0];
    double at = 0.0;
    for (std::size_t k = 1; k < series.tac.size(); ++k) {
        if (series.tac[k] > best) {
            best = series.tac[k];
            at = series.grid.time(k);
        }
    }
    return {best, at};
}

// Perfect transfer happens exactly when both transfer frequencies fit odd
// multiples of pi into a common time: omega_plus * tau = (2 n_plus + 1) pi
// and omega_minus * tau = (2 n_minus + 1) pi. Returns the solution with the
// smallest |n_plus| (equivalently the smallest tau), or nothing if no odd
// pair up to n_max matches.
struct OddRatioSolution {
    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;
    double tau = 0.0;
};

inline std::optional<OddRatioSolution> perfect_transfer_condition(double omega_plus,
                                                                  double omega_minus,
                                                                  int n_max = 50,
                                                                  double tol = 1e-9) {
    if (omega_minus == 0.0)
        throw ValidationError("perfect_transfer_condition: omega_minus must be nonzero");
    if (n_max < 0) throw ValidationError("perfect_transfer_condition: n_max must be >= 0");
    if (omega_plus == 0.0) return std::nullopt;

    const double scale = tol * std::max(std::fabs(omega_plus), std::fabs(omega_minus));
    const std::int64_t m_limit = 2 * static_cast<std::int64_t>(n_max) + 1;
    const double sign_plus = omega_plus > 0.0 ? 1.0 : -1.0;

    for (std::int64_t a = 1; a <= m_limit; a += 2) {
        const double m_plus = sign_plus * static_cast<double>(a);
        const double ideal = m_plus * omega_minus / omega_plus;
        // Largest odd integer <= ideal, then its successor: the two odd
        // integers bracketing the ideal ratio.
        const double lo = 2.0 * std::floor((ideal - 1.0) / 2.0) + 1.0;
        double best_m_minus = 0.0;
        double best_res = std::numeric_limits<double>::infinity();
        for (double m_minus : {lo, lo + 2.0}) {
            if (std::fabs(m_minus) > static_cast<double>(m_limit)) continue;
            const double res = std::fabs(omega_plus * m_minus - omega_minus * m_plus);
            if (res < best_res) {
                best_res = res;
                best_m_minus = m_minus;
            }
        }
        if (best_res <= scale) {
            OddRatioSolution sol;
            sol.n_plus = (static_cast<std::int64_t>(m_plus) - 1) / 2;
            sol.n_minus = (static_cast<std::int64_t>(best_m_minus) - 1) / 2;
            sol.tau = m_plus * std::numbers::pi / omega_plus;
            return sol;
        }
    }
    return std::nullopt;
}

} // namespace qpt
