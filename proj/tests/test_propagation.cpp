#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "qpt/errors.hpp"
#include "qpt/network.hpp"
#include "qpt/propagation.hpp"
#include "qpt/reduced_forms.hpp"
#include "support/random_states.hpp"

using namespace qpt;
using Catch::Approx;

namespace {

ExcitonDecomposition decompose(const NetworkParams& p) {
    return exciton_decomposition(build_hamiltonian(p));
}

const NetworkParams kDimer{{0.36, -0.36}, {{0.0, 0.5}, {0.5, 0.0}}};

} // namespace

TEST_CASE("time grid counts include both endpoints") {
    CHECK(TimeGrid(10.0, 0.001).count == 10001);
    CHECK(TimeGrid(10.0, 0.01).count == 1001);
    CHECK(TimeGrid(1.0, 0.3).count == 4);  // samples at 0, 0.3, 0.6, 0.9
    CHECK(TimeGrid(1.0, 1.0).count == 2);
    CHECK(TimeGrid(2.0, 0.5).time(3) == Approx(1.5).margin(1e-15));
    CHECK_THROWS_AS(TimeGrid(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(TimeGrid(-1.0, 0.1), ValidationError);
    CHECK_THROWS_AS(TimeGrid(0.5, 1.0), ValidationError);
}

TEST_CASE("state constructors enforce unit norm and valid sites") {
    CHECK_THROWS_AS(make_pure_state(CVector{Complex(1.0, 0.0), Complex(0.1, 0.0)}),
                    ValidationError);
    CHECK_THROWS_AS(site_basis_state(3, 3), ValidationError);
    const PureState s = site_basis_state(3, 1);
    CHECK(s.amplitudes[1] == Complex(1.0, 0.0));
}

TEST_CASE("propagation at time zero returns the state exactly") {
    const ExcitonDecomposition es = decompose(kDimer);
    const PureState s = site_basis_state(2, 0);
    const PureState out = propagate(es, s, 0.0);
    CHECK(out.amplitudes == s.amplitudes);
}

TEST_CASE("propagation preserves the norm along a full trajectory") {
    const Trajectory traj = trajectory(decompose(kDimer), 0, TimeGrid(10.0, 0.05));
    for (const CVector& c : traj.amplitudes) CHECK(norm2(c) == Approx(1.0).margin(1e-13));
    CHECK(traj.amplitudes[0][0] == Complex(1.0, 0.0));
    CHECK(traj.amplitudes[0][1] == Complex(0.0, 0.0));
}

TEST_CASE("resonant dimer reaches perfect transfer at a quarter period") {
    const NetworkParams p{{0.0, 0.0}, {{0.0, 0.5}, {0.5, 0.0}}};
    const double omega = dimer_form(p).omega;
    const PureState out = propagate(decompose(p), site_basis_state(2, 0),
                                    0.5 * std::numbers::pi / omega);
    CHECK(std::abs(out.amplitudes[1]) == Approx(1.0).margin(1e-12));
    CHECK(std::abs(out.amplitudes[0]) < 1e-12);
}

TEST_CASE("dimer moduli follow the single-frequency closed form") {
    const DimerForm form = dimer_form(kDimer);
    const Trajectory traj = trajectory(decompose(kDimer), 0, TimeGrid(10.0, 0.01));
    const double s = std::sin(form.theta);
    for (std::size_t k = 0; k < traj.grid.count; ++k) {
        const double t = traj.grid.time(k);
        const double f = s * std::fabs(std::sin(form.omega * t));
        CHECK(std::fabs(traj.moduli[k][1] - f) < 1e-12);
        CHECK(std::fabs(traj.moduli[k][0] - std::sqrt(1.0 - f * f)) < 1e-12);
    }
}

TEST_CASE("propagation composes over time") {
    const CMatrix h = qpt_test::random_hermitian(4, 21);
    ExcitonDecomposition es = exciton_decomposition(HermitianOperator{h});
    const PureState s = qpt_test::random_pure_state(4, 22);
    const PureState two_steps = propagate(es, propagate(es, s, 0.7), 0.5);
    const PureState direct = propagate(es, s, 1.2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(two_steps.amplitudes[i] - direct.amplitudes[i]) < 1e-12);
}

TEST_CASE("dimer dynamics revive after a full phase period") {
    const ExcitonDecomposition es = decompose(kDimer);
    const double omega = dimer_form(kDimer).omega;  // energies are -omega, +omega
    const PureState s = qpt_test::random_pure_state(2, 5);
    const PureState out = propagate(es, s, 2.0 * std::numbers::pi / omega);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(out.amplitudes[i] - s.amplitudes[i]) < 1e-10);
}

TEST_CASE("mean energy is conserved along a trajectory") {
    const CMatrix h = qpt_test::random_hermitian(5, 33);
    ExcitonDecomposition es = exciton_decomposition(HermitianOperator{h});
    const PureState s = qpt_test::random_pure_state(5, 34);

    const auto energy = [&](const PureState& state) {
        Complex e(0.0, 0.0);
        const CVector hv = h * state.amplitudes;
        for (std::size_t i = 0; i < 5; ++i) e += std::conj(state.amplitudes[i]) * hv[i];
        return e.real();
    };
    const double e0 = energy(s);
    for (double t : {0.3, 1.7, 8.0, 40.0})
        CHECK(energy(propagate(es, s, t)) == Approx(e0).margin(1e-12));
}

TEST_CASE("density matrix holds all pairwise amplitude products") {
    const PureState s = qpt_test::random_pure_state(3, 9);
    const CMatrix rho = density_matrix(s);
    Complex tr(0.0, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        tr += rho(i, i);
        for (std::size_t j = 0; j < 3; ++j) {
            const Complex want = s.amplitudes[i] * std::conj(s.amplitudes[j]);
            CHECK(std::abs(rho(i, j) - want) < 1e-15);
        }
    }
    CHECK(std::abs(tr - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("propagation validates dimensions, time and norm") {
    const ExcitonDecomposition es = decompose(kDimer);
    CHECK_THROWS_AS(propagate(es, site_basis_state(3, 0), 1.0), ValidationError);
    CHECK_THROWS_AS(propagate(es, site_basis_state(2, 0),
                              std::numeric_limits<double>::infinity()),
                    ValidationError);
    CHECK_THROWS_AS(propagate(es, PureState{CVector{Complex(2.0, 0.0), Complex(0.0, 0.0)}}, 1.0),
                    ValidationError);
    CHECK_THROWS_AS(trajectory(es, 2, TimeGrid(1.0, 0.1)), ValidationError);
}
