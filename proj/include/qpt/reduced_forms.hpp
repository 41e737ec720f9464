#pragma once

#include <cmath>
#include <numbers>

#include "qpt/errors.hpp"
#include "qpt/network.hpp"

namespace qpt {

// Two-site network with the mean energy removed: a single Rabi frequency
// omega = sqrt(bias^2 + coupling^2) and a mixing angle theta in [0, pi] with
// tan(theta) = coupling / bias. The mean energy only contributes a global
// phase, so every population and coherence quantity depends on (omega, theta)
// alone.
struct DimerForm {
    double omega;     // oscillation frequency, sqrt(bias^2 + coupling^2)
    double theta;     // mixing angle in [0, pi]
    double bias;      // (E1 - E2) / 2
    double coupling;  // J12
};

inline DimerForm dimer_form(const NetworkParams& p) {
    validate_network(p);
    if (p.size() != 2) throw ValidationError("dimer_form: network must have exactly 2 sites");
    const double bias = 0.5 * (p.site_energies[0] - p.site_energies[1]);
    const double j = p.couplings[0][1];
    const double omega = std::hypot(bias, j);
    if (omega == 0.0)
        throw ValidationError("dimer_form: degenerate dimer (bias and coupling both zero)");
    double theta = std::atan2(j, bias);
    if (theta < 0.0) theta += std::numbers::pi;  // same tangent, sin(theta) >= 0
    return DimerForm{omega, theta, bias, j};
}

// Three-site network split into the end-site pair and the middle site.
// When the end sites are resonant and |J12| == |J23| one superposition of the
// end sites decouples from the middle site entirely; the fields below then
// describe the remaining two-level dynamics relative to that stationary
// state. Transfer frequencies omega_plus / omega_minus are measured from the
// stationary state's energy.
struct TrimerReducedForm {
    double end_detuning;     // (E1 - E3) / 2
    double barrier;          // E2 - (E1 + E3) / 2
    double cross_coupling;   // J13

    bool transfer_structured = false;
    // Populated only when transfer_structured:
    double parity = 0.0;           // sign s in J12 = s * J23
    double mixing_angle = 0.0;     // vartheta in [0, pi]
    double mixing_amplitude = 0.0; // r = |sin(vartheta / 2)|
    double omega_plus = 0.0;
    double omega_minus = 0.0;
};

inline TrimerReducedForm trimer_reduced(const NetworkParams& p, double tol = 1e-9) {
    validate_network(p);
    if (p.size() != 3) throw ValidationError("trimer_reduced: network must have exactly 3 sites");
    if (tol < 0.0) throw ValidationError("trimer_reduced: tol must be >= 0");

    const double j12 = p.couplings[0][1];
    const double j23 = p.couplings[1][2];
    const double j13 = p.couplings[0][2];

    TrimerReducedForm f;
    f.end_detuning = 0.5 * (p.site_energies[0] - p.site_energies[2]);
    f.barrier = p.site_energies[1] - 0.5 * (p.site_energies[0] + p.site_energies[2]);
    f.cross_coupling = j13;

    const bool resonant = std::fabs(f.end_detuning) <= tol;
    const bool matched = std::fabs(std::fabs(j12) - std::fabs(j23)) <= tol;
    if (!resonant || !matched) return f;

    if (std::fabs(j23) > tol) {
        f.parity = (j12 * j23 > 0.0) ? 1.0 : -1.0;
    } else if (std::fabs(j12) <= tol) {
        // Middle site decoupled; both parities describe the same Hamiltonian.
        f.parity = 1.0;
    } else {
        return f;
    }
    f.transfer_structured = true;

    const double detune = f.barrier - f.parity * j13;
    // |j23| keeps vartheta in [0, pi]; the dynamics only ever sees
    // sin^2, cos^2 of vartheta/2 and |sin(vartheta)|, all even in the
    // coupling sign.
    f.mixing_angle = std::atan2(2.0 * std::sqrt(2.0) * std::fabs(j23), detune);
    f.mixing_amplitude = std::sin(0.5 * f.mixing_angle);

    const double center = 0.5 * (f.barrier + 3.0 * f.parity * j13);
    const double half_gap = 0.5 * std::hypot(detune, 2.0 * std::sqrt(2.0) * j23);
    f.omega_plus = center + half_gap;
    f.omega_minus = center - half_gap;
    return f;
}

} // namespace qpt
