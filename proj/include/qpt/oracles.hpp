#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qpt/coherence.hpp"
#include "qpt/errors.hpp"
#include "qpt/reduced_forms.hpp"

// Closed-form references for the two- and three-site networks. Everything
// here is computed from the reduced parameters alone — no matrices, no
// eigensolver — so these functions can cross-check the numerical pipeline.

namespace qpt {

// |<2|psi(t)>| for a start at site 1: sin(theta) |sin(omega t)|.
inline double dimer_fidelity(const DimerForm& form, double t) {
    return std::sin(form.theta) * std::fabs(std::sin(form.omega * t));
}

// Site-basis coherence of the dimer at time t, both measures. With transfer
// fidelity F the populations are (1-F^2, F^2), so the l1 value is
// 2 F sqrt(1-F^2) and the entropy-based value is the binary entropy of F^2.
inline CoherenceValue dimer_site_coherence(const DimerForm& form, double t) {
    const double f = dimer_fidelity(form, t);
    const double f2 = f * f;
    CoherenceValue value;
    value.l1 = 2.0 * f * std::sqrt(std::max(0.0, 1.0 - f2));
    value.reoc = binary_entropy(f2);
    return value;
}

// Earliest time at which the site-basis l1 coherence peaks. The peak value
// 2 F sqrt(1-F^2) = 1 is reachable only if F can reach 1/sqrt(2); otherwise
// the coherence still grows at the transfer time pi/(2 omega).
inline double dimer_peak_coherence_time(const DimerForm& form) {
    const double s = std::sin(form.theta);
    const double quarter_period = 0.5 * std::numbers::pi / form.omega;
    if (s * std::numbers::sqrt2 >= 1.0)
        return std::asin(1.0 / (std::numbers::sqrt2 * s)) / form.omega;
    return quarter_period;
}

// Exciton-basis coherence of the dimer; constant in time. Eigenstate weights
// are cos^2(theta/2) and sin^2(theta/2).
inline CoherenceValue dimer_exciton_coherence(const DimerForm& form) {
    CoherenceValue value;
    value.l1 = std::sin(form.theta);
    const double w = std::cos(0.5 * form.theta);
    value.reoc = binary_entropy(w * w);
    return value;
}

// Long-run time average of the site-basis l1 coherence,
// (2/pi) [s + (1 - s^2) artanh(s)] with s = sin(theta). The time average of
// 2F sqrt(1-F^2) over one transfer period reduces to this closed form.
inline double dimer_tac_asymptote_l1(const DimerForm& form) {
    const double s = std::sin(form.theta);
    const double c2 = std::max(0.0, 1.0 - s * s);
    const double term = c2 > 0.0 ? c2 * std::atanh(std::min(s, 1.0)) : 0.0;
    return 2.0 / std::numbers::pi * (s + term);
}

// Long-run time average of the site-basis entropy coherence. No elementary
// antiderivative, so integrate h(s^2 sin^2 x) over a quarter period by the
// composite trapezoid rule; the average is (2/pi) times that integral.
inline double dimer_tac_asymptote_reoc(const DimerForm& form, std::size_t n_points = 4097) {
    if (n_points < 2)
        throw ValidationError("dimer_tac_asymptote_reoc: need at least 2 quadrature points");
    const double s2 = std::sin(form.theta) * std::sin(form.theta);
    const double h = 0.5 * std::numbers::pi / static_cast<double>(n_points - 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < n_points; ++k) {
        const double x = static_cast<double>(k) * h;
        const double sn = std::sin(x);
        const double weight = (k == 0 || k == n_points - 1) ? 0.5 : 1.0;
        sum += weight * binary_entropy(s2 * sn * sn);
    }
    return 2.0 / std::numbers::pi * sum * h;
}

// Closed forms for the parity-structured trimer. Requires the reduced form
// to carry transfer structure (matched outer couplings, resonant ends).
struct TrimerOracle {
    TrimerReducedForm form;
};

inline TrimerOracle trimer_oracle(const TrimerReducedForm& form) {
    if (!form.transfer_structured)
        throw ValidationError("trimer_oracle: form lacks transfer structure");
    return TrimerOracle{form};
}

// Moduli (f1, f2, f3) of the site amplitudes for a start at site 1. The
// bright doublet carries weights sin^2 and cos^2 of half the mixing angle;
// the middle site sees only the doublet beat.
inline std::array<double, 3> trimer_f_functions(const TrimerOracle& oracle, double t) {
    const TrimerReducedForm& f = oracle.form;
    const double sp = f.mixing_amplitude * f.mixing_amplitude;  // sin^2(angle/2)
    const double cp = 1.0 - sp;
    const std::complex<double> ep{std::cos(f.omega_plus * t), -std::sin(f.omega_plus * t)};
    const std::complex<double> em{std::cos(f.omega_minus * t), -std::sin(f.omega_minus * t)};
    const std::complex<double> z1 = 1.0 + ep * sp + em * cp;
    const std::complex<double> z3 = 1.0 - ep * sp - em * cp;
    const double beat = std::sin(0.5 * (f.omega_plus - f.omega_minus) * t);
    std::array<double, 3> out;
    out[0] = 0.5 * std::abs(z1);
    out[1] = std::fabs(std::sin(f.mixing_angle) * beat) / std::numbers::sqrt2;
    out[2] = 0.5 * std::abs(z3);
    return out;
}

inline double trimer_fidelity(const TrimerOracle& oracle, double t) {
    return trimer_f_functions(oracle, t)[2];
}

// Exciton-basis coherence of the structured trimer in terms of the mixing
// amplitude r = sin(angle/2): constant in time, maximal at r = 1/sqrt(2).
inline CoherenceValue trimer_exciton_coherence(double r) {
    if (!(r >= 0.0 && r <= 1.0))
        throw ValidationError("trimer_exciton_coherence: amplitude must lie in [0, 1]");
    const double c = std::sqrt(std::max(0.0, 1.0 - r * r));
    CoherenceValue value;
    value.l1 = r + c + r * c;
    value.reoc = 1.0 + 0.5 * binary_entropy(r * r);
    return value;
}

} // namespace qpt
