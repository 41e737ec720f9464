#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qpt/errors.hpp"
#include "qpt/metrics.hpp"
#include "qpt/network.hpp"
#include "qpt/oracles.hpp"
#include "qpt/propagation.hpp"
#include "qpt/reduced_forms.hpp"

using namespace qpt;
using Catch::Approx;

namespace {

DimerForm form_from(double bias, double coupling) {
    return dimer_form(NetworkParams{{bias, -bias}, {{0.0, coupling}, {coupling, 0.0}}});
}

DimerForm form_at_angle(double theta, double omega) {
    return form_from(omega * std::cos(theta), omega * std::sin(theta));
}

NetworkParams structured_trimer(double barrier, double j23, double j13, double sigma) {
    const double j12 = sigma * j23;
    return NetworkParams{{0.0, barrier, 0.0},
                         {{0.0, j12, j13}, {j12, 0.0, j23}, {j13, j23, 0.0}}};
}

NetworkParams random_structured_trimer(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::uniform_real_distribution<double> mag(0.05, 0.5);
    for (;;) {
        const double sigma = (rng() & 1u) ? 1.0 : -1.0;
        const double sign = (rng() & 1u) ? 1.0 : -1.0;
        const NetworkParams p = structured_trimer(u(rng), sign * mag(rng), u(rng), sigma);
        const TrimerReducedForm f = trimer_reduced(p);
        if (std::min(std::fabs(f.omega_plus), std::fabs(f.omega_minus)) >= 0.02) return p;
    }
}

} // namespace

TEST_CASE("two-site transfer amplitude follows sin(theta) |sin(omega t)|") {
    const DimerForm form = form_from(0.36, 0.50);
    CHECK(dimer_fidelity(form, 0.0) == 0.0);
    const double quarter = 0.5 * std::numbers::pi / form.omega;
    CHECK(dimer_fidelity(form, quarter) == Approx(std::sin(form.theta)).margin(1e-15));
    CHECK(dimer_fidelity(form, 2.0 * quarter) == Approx(0.0).margin(1e-12));
}

TEST_CASE("two-site coherence peak time switches branch at sin(theta) = 1/sqrt(2)") {
    // Above the branch point the coherence reaches 1 before the transfer
    // peak; below it the best the dimer can do is the transfer peak itself.
    const DimerForm resonant = form_at_angle(std::numbers::pi / 2.0, 0.5);
    CHECK(dimer_peak_coherence_time(resonant) == Approx(std::numbers::pi / 2.0).margin(1e-12));

    const DimerForm boundary = form_at_angle(std::numbers::pi / 4.0, 0.8);
    const double quarter = 0.5 * std::numbers::pi / boundary.omega;
    CHECK(dimer_peak_coherence_time(boundary) == Approx(quarter).margin(1e-9));

    const DimerForm weak = form_at_angle(std::numbers::pi / 6.0, 0.8);
    CHECK(dimer_peak_coherence_time(weak) ==
          Approx(0.5 * std::numbers::pi / weak.omega).margin(1e-12));

    // At that peak the weak-mixing dimer holds l1 coherence sin(2 theta).
    const double t_peak = dimer_peak_coherence_time(weak);
    CHECK(dimer_site_coherence(weak, t_peak).l1 ==
          Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
}

TEST_CASE("two-site site coherence closed form matches the propagated state") {
    const DimerForm form = form_from(0.2, -0.4);
    const NetworkParams p{{0.2, -0.2}, {{0.0, -0.4}, {-0.4, 0.0}}};
    const Trajectory traj =
        trajectory(exciton_decomposition(build_hamiltonian(p)), 0, TimeGrid(10.0, 0.01));
    for (std::size_t k = 0; k < traj.grid.count; ++k) {
        const CoherenceValue v = dimer_site_coherence(form, traj.grid.time(k));
        CHECK(std::fabs(pure_l1_from_moduli(traj.moduli[k]) - v.l1) < 1e-12);
        CHECK(std::fabs(pure_reoc_from_moduli(traj.moduli[k]) - v.reoc) < 1e-12);
    }
}

TEST_CASE("two-site exciton coherence depends only on the mixing angle") {
    const CoherenceValue at_resonance = dimer_exciton_coherence(form_at_angle(std::numbers::pi / 2.0, 1.3));
    CHECK(at_resonance.l1 == Approx(1.0).margin(1e-12));
    CHECK(at_resonance.reoc == Approx(1.0).margin(1e-12));

    const double theta = std::numbers::pi / 3.0;
    const CoherenceValue tilted = dimer_exciton_coherence(form_at_angle(theta, 0.7));
    CHECK(tilted.l1 == Approx(std::sin(theta)).margin(1e-12));
    const double w = std::cos(0.5 * theta) * std::cos(0.5 * theta);
    CHECK(tilted.reoc == Approx(binary_entropy(w)).margin(1e-12));
}

TEST_CASE("long-run average of the l1 coherence has the closed form limits") {
    CHECK(dimer_tac_asymptote_l1(form_at_angle(std::numbers::pi / 2.0, 1.0)) ==
          Approx(2.0 / std::numbers::pi).margin(1e-12));
    CHECK(dimer_tac_asymptote_l1(form_at_angle(1e-8, 1.0)) == Approx(0.0).margin(1e-7));
    // The average is not monotone in the mixing angle: it climbs past the
    // resonant value 2/pi, peaks where sin(theta) is near 0.834, and falls
    // back to 2/pi at theta = pi/2.
    std::vector<double> values;
    for (int i = 1; i <= 10; ++i) {
        values.push_back(
            dimer_tac_asymptote_l1(form_at_angle(0.05 * std::numbers::pi * i, 1.0)));
    }
    for (int i = 1; i <= 5; ++i) {
        CHECK(values[i] > values[i - 1]); // rising branch, sin(theta) < 0.81
    }
    for (int i = 6; i <= 9; ++i) {
        CHECK(values[i] < values[i - 1]); // falling branch, sin(theta) > 0.89
    }
    CHECK(*std::max_element(values.begin(), values.end()) > 2.0 / std::numbers::pi);
}

TEST_CASE("entropy-average quadrature is converged at the default resolution") {
    const DimerForm form = form_at_angle(1.1, 1.0);
    const double coarse = dimer_tac_asymptote_reoc(form, 4097);
    const double fine = dimer_tac_asymptote_reoc(form, 8193);
    CHECK(std::fabs(coarse - fine) < 1e-4);
    CHECK_THROWS_AS(dimer_tac_asymptote_reoc(form, 1), ValidationError);
}

TEST_CASE("both long-run averages match the pipeline after 100 whole periods") {
    // Run the full numerical pipeline for exactly 100 transfer periods; at a
    // whole-period boundary the running average equals the per-period
    // average, so only quadrature error remains.
    const double theta = 1.0, omega = 1.0;
    const DimerForm form = form_at_angle(theta, omega);
    const double period = std::numbers::pi / omega;
    const NetworkParams p{{form.bias, -form.bias},
                          {{0.0, form.coupling}, {form.coupling, 0.0}}};
    const Trajectory traj = trajectory(exciton_decomposition(build_hamiltonian(p)), 0,
                                       TimeGrid(100.0 * period, period / 1000.0));
    const CoherenceSeries l1 = coherence_series(traj, Measure::l1, BasisChoice::site());
    const CoherenceSeries re = coherence_series(traj, Measure::reoc, BasisChoice::site());
    CHECK(std::fabs(l1.tac.back() - dimer_tac_asymptote_l1(form)) < 2e-3);
    CHECK(std::fabs(re.tac.back() - dimer_tac_asymptote_reoc(form)) < 2e-3);
}

TEST_CASE("three-site reduced form identifies transfer structure") {
    const TrimerReducedForm good = trimer_reduced(structured_trimer(0.3, 0.25, 0.1, -1.0));
    CHECK(good.transfer_structured);
    CHECK(good.parity == -1.0);
    CHECK(good.barrier == Approx(0.3));
    CHECK(good.end_detuning == 0.0);

    // Detuned ends or unmatched outer couplings break the structure.
    NetworkParams detuned = structured_trimer(0.3, 0.25, 0.1, 1.0);
    detuned.site_energies[0] = 0.05;
    CHECK_FALSE(trimer_reduced(detuned).transfer_structured);
    NetworkParams unmatched = structured_trimer(0.3, 0.25, 0.1, 1.0);
    unmatched.couplings[0][1] = unmatched.couplings[1][0] = 0.4;
    CHECK_FALSE(trimer_reduced(unmatched).transfer_structured);
    CHECK_THROWS_AS(trimer_oracle(trimer_reduced(unmatched)), ValidationError);
}

TEST_CASE("three-site transfer frequencies reproduce the spectrum") {
    // The stationary level sits at -parity * J13; the bright doublet sits at
    // omega_plus and omega_minus above it. Check against the eigensolver.
    const NetworkParams p = structured_trimer(0.4, 0.3, -0.15, 1.0);
    const TrimerReducedForm f = trimer_reduced(p);
    REQUIRE(f.transfer_structured);
    const double dark_level = -f.parity * f.cross_coupling;
    std::vector<double> expected{dark_level, dark_level + f.omega_minus,
                                 dark_level + f.omega_plus};
    std::sort(expected.begin(), expected.end());
    const ExcitonDecomposition es = exciton_decomposition(build_hamiltonian(p));
    for (std::size_t m = 0; m < 3; ++m)
        CHECK(es.energies[m] == Approx(expected[m]).margin(1e-12));
}

TEST_CASE("three-site amplitude moduli start localized and stay unitary") {
    const TrimerOracle oracle = trimer_oracle(trimer_reduced(structured_trimer(0.2, 0.3, 0.1, 1.0)));
    const std::array<double, 3> at_zero = trimer_f_functions(oracle, 0.0);
    CHECK(at_zero[0] == Approx(1.0).margin(1e-15));
    CHECK(at_zero[1] == 0.0);
    CHECK(at_zero[2] == Approx(0.0).margin(1e-15));
    for (int k = 0; k <= 200; ++k) {
        const std::array<double, 3> f = trimer_f_functions(oracle, 0.05 * k);
        CHECK(f[0] * f[0] + f[1] * f[1] + f[2] * f[2] == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("three-site closed forms match the propagated moduli on random draws") {
    std::mt19937_64 rng(4242);
    const TimeGrid grid(10.0, 0.1);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const NetworkParams p = random_structured_trimer(rng);
        const TrimerOracle oracle = trimer_oracle(trimer_reduced(p));
        const Trajectory traj = trajectory(exciton_decomposition(build_hamiltonian(p)), 0, grid);
        for (std::size_t k = 0; k < grid.count; ++k) {
            const std::array<double, 3> f = trimer_f_functions(oracle, grid.time(k));
            for (std::size_t s = 0; s < 3; ++s)
                worst = std::max(worst, std::fabs(traj.moduli[k][s] - f[s]));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("a vanishing bright-block detuning pins the mixing amplitude") {
    // barrier == parity * J13 zeroes the detuning, so the mixing angle is
    // pi/2 and r = 1/sqrt(2) exactly.
    const TrimerReducedForm f = trimer_reduced(structured_trimer(0.3, 0.25, 0.3, 1.0));
    REQUIRE(f.transfer_structured);
    CHECK(f.mixing_angle == Approx(std::numbers::pi / 2.0).margin(1e-12));
    CHECK(f.mixing_amplitude == Approx(1.0 / std::numbers::sqrt2).margin(1e-10));
}

TEST_CASE("the stationary level carries weight 1/sqrt(2) on the start site") {
    std::mt19937_64 rng(99);
    for (int draw = 0; draw < 50; ++draw) {
        const ExcitonDecomposition es =
            exciton_decomposition(build_hamiltonian(random_structured_trimer(rng)));
        std::size_t dark = 0;
        double least = std::abs(es.vectors(1, 0));
        for (std::size_t m = 1; m < 3; ++m) {
            if (std::abs(es.vectors(1, m)) < least) {
                least = std::abs(es.vectors(1, m));
                dark = m;
            }
        }
        CHECK(least < 1e-10);
        CHECK(std::fabs(std::abs(es.vectors(0, dark)) - 1.0 / std::numbers::sqrt2) < 1e-10);
    }
}

TEST_CASE("three-site exciton coherence is extremal at r = 1/sqrt(2)") {
    CHECK(trimer_exciton_coherence(0.0).l1 == Approx(1.0).margin(1e-15));
    CHECK(trimer_exciton_coherence(0.0).reoc == Approx(1.0).margin(1e-15));
    CHECK(trimer_exciton_coherence(1.0).l1 == Approx(1.0).margin(1e-15));
    CHECK(trimer_exciton_coherence(1.0).reoc == Approx(1.0).margin(1e-15));

    const double r_star = 1.0 / std::numbers::sqrt2;
    CHECK(trimer_exciton_coherence(r_star).l1 == Approx(0.5 + std::numbers::sqrt2).margin(1e-12));
    CHECK(trimer_exciton_coherence(r_star).reoc == Approx(1.5).margin(1e-12));
    CHECK_THROWS_AS(trimer_exciton_coherence(1.5), ValidationError);

    // Golden-section search over [0, 1] lands on the analytic maximizer.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    for (int it = 0; it < 80; ++it) {
        if (trimer_exciton_coherence(x1).l1 < trimer_exciton_coherence(x2).l1) {
            a = x1;
            x1 = x2;
            x2 = a + gr * (b - a);
        } else {
            b = x2;
            x2 = x1;
            x1 = b - gr * (b - a);
        }
    }
    const double r_best = 0.5 * (a + b);
    CHECK(std::fabs(r_best - r_star) < 1e-6);
    CHECK(trimer_exciton_coherence(r_best).l1 ==
          Approx(0.5 + std::numbers::sqrt2).margin(1e-9));
}
