#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abchain/errors.hpp"
#include "abchain/linalg.hpp"
#include "abchain/propagator.hpp"

using namespace abchain;

namespace {

constexpr double kPi = std::numbers::pi;
const PairParams kUnitOmega = PairParams::from_omega(1.0, 100.0);

}  // namespace

TEST_CASE("constant propagator at J=0 is a z rotation") {
    const ComplexMatrix u = propagate_constant(kUnitOmega, 0.0, kPi / 2, Subspace::logical2);
    CHECK(max_abs_diff(u, rotation_z(kPi)) <= 1e-14);
}

TEST_CASE("constant propagator at t=0 is the identity") {
    CHECK(max_abs_diff(propagate_constant(kUnitOmega, 0.7, 0.0, Subspace::full4),
                       ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("J = omega/2 for a quarter precession period gives the Hadamard") {
    const ComplexMatrix u =
        propagate_constant(kUnitOmega, 0.5, kPi / (2.0 * std::sqrt(2.0)), Subspace::logical2);
    ComplexMatrix h(2);
    const double s = 1.0 / std::sqrt(2.0);
    h(0, 0) = s;
    h(0, 1) = s;
    h(1, 0) = s;
    h(1, 1) = -s;
    CHECK(fidelity_up_to_phase(u, h) >= 1.0 - 1e-12);

    // independent route: eigendecomposition of the logical Hamiltonian
    const ComplexMatrix oracle =
        expm_hermitian(logical_hamiltonian(kUnitOmega, 0.5), kPi / (2.0 * std::sqrt(2.0)));
    CHECK(max_abs_diff(u, oracle) <= 1e-13);
}

TEST_CASE("constant propagator matches the eigendecomposition oracle on the full 4x4") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> energy(-3.0, 3.0);
    std::uniform_real_distribution<double> coupling(0.0, 2.0);
    std::uniform_real_distribution<double> time(0.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        const PairParams p{energy(rng), energy(rng), 2.0};
        const double j = coupling(rng), t = time(rng);
        const ComplexMatrix analytic = propagate_constant(p, j, t, Subspace::full4);
        const ComplexMatrix oracle = expm_hermitian(pair_hamiltonian(p, j), t);
        CHECK(max_abs_diff(analytic, oracle) <= 1e-11);
        CHECK(unitarity_error(analytic) <= 1e-12);
    }
}

TEST_CASE("propagate_constant rejects negative time and out-of-range J") {
    CHECK_THROWS_AS(propagate_constant(kUnitOmega, 0.5, -1.0, Subspace::logical2),
                    std::invalid_argument);
    const PairParams tight = PairParams::from_omega(1.0, 0.25);
    CHECK_THROWS_AS(propagate_constant(tight, 0.5, 1.0, Subspace::logical2),
                    DomainViolation);
}

TEST_CASE("empty schedule propagates to the identity") {
    const Schedule empty{kUnitOmega, {}};
    CHECK(max_abs_diff(propagate_schedule(empty, Subspace::logical2),
                       ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("schedule composition order: first pulse acts first") {
    Schedule s{kUnitOmega, {}};
    s.pulses.push_back(Pulse::square(0.0, kPi / 2));                        // Rz(pi)
    s.pulses.push_back(Pulse::square(0.5, kPi / (2.0 * std::sqrt(2.0))));   // tilted pi
    const ComplexMatrix u = propagate_schedule(s, Subspace::logical2);
    const ComplexMatrix tilted =
        propagate_constant(kUnitOmega, 0.5, kPi / (2.0 * std::sqrt(2.0)), Subspace::logical2);
    const ComplexMatrix zpulse = propagate_constant(kUnitOmega, 0.0, kPi / 2, Subspace::logical2);
    CHECK(max_abs_diff(u, tilted * zpulse) <= 1e-14);

    // the [Rz(pi), tilted-pi] pair equals a y rotation by 2*theta up to phase
    CHECK(fidelity_up_to_phase(u, rotation_y(kPi / 2)) >= 1.0 - 1e-12);
}

TEST_CASE("repeating a pulse squares its unitary") {
    Schedule twice{kUnitOmega, {Pulse::square(0.3, 1.1), Pulse::square(0.3, 1.1)}};
    const ComplexMatrix one = propagate_constant(kUnitOmega, 0.3, 1.1, Subspace::full4);
    CHECK(max_abs_diff(propagate_schedule(twice, Subspace::full4), one * one) <= 1e-12);
}

TEST_CASE("waveform integrator reproduces a constant to machine precision") {
    const ComplexMatrix num = propagate_waveform(
        kUnitOmega, [](double) { return 0.5; }, 2.0, 64, Subspace::full4);
    CHECK(max_abs_diff(num, propagate_constant(kUnitOmega, 0.5, 2.0, Subspace::full4)) <=
          1e-13);
}

TEST_CASE("zero waveform equals free evolution") {
    const ComplexMatrix num = propagate_waveform(
        kUnitOmega, [](double) { return 0.0; }, 1.7, 32, Subspace::logical2);
    CHECK(max_abs_diff(num, propagate_constant(kUnitOmega, 0.0, 1.7, Subspace::logical2)) <=
          1e-13);
}

TEST_CASE("waveform integrator refuses too few steps") {
    CHECK_THROWS_AS(propagate_waveform(kUnitOmega, [](double) { return 0.0; }, 1.0, 8,
                                       Subspace::logical2),
                    std::invalid_argument);
}

TEST_CASE("midpoint integrator error falls by 4x per step doubling") {
    // Quadratic ramp at omega = 0: every H(t) commutes, the exact answer
    // is the area rotation, and the only error is midpoint quadrature.
    const PairParams degenerate = PairParams::from_omega(0.0, 10.0);
    const double t_total = 2.0;
    const auto ramp = [](double t) { return 0.75 * t * t; };
    const double area_k = 2.0 * 0.75 * t_total * t_total * t_total / 3.0;
    const ComplexMatrix exact = rotation_operator({{1.0, 0.0, 0.0}, 2.0 * area_k});

    double prev_err = 0.0;
    for (int steps : {64, 128, 256}) {
        const ComplexMatrix num =
            propagate_waveform(degenerate, ramp, t_total, steps, Subspace::logical2);
        const double err = max_abs_diff(num, exact);
        if (prev_err > 0.0) {
            const double ratio = prev_err / err;
            CHECK(ratio >= 3.5);
            CHECK(ratio <= 4.5);
        }
        prev_err = err;
    }
}

TEST_CASE("gaussian pulse construction and tail accounting") {
    const Pulse g = Pulse::gaussian(0.5, 1.0, 2.5);
    CHECK(g.duration == doctest::Approx(5.0));
    CHECK(g.value_at(2.5) == doctest::Approx(0.5));            // peak at center
    CHECK(g.value_at(2.0) == doctest::Approx(0.25));           // half max at fwhm/2
    CHECK(g.truncated_tail_area() > 0.0);
    CHECK(g.truncated_tail_area() < 1e-4);

    CHECK_THROWS_AS(Pulse::gaussian(0.5, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(Pulse::gaussian(0.5, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("equal-area gaussian matches the square pulse as omega -> 0") {
    // target area: integral of K = 2J equal to pi
    const double fwhm = 1.0;
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double trunc = 2.5 * fwhm;
    // area of the truncated gaussian: peak * sigma * sqrt(2pi) * erf(w / (sigma sqrt 2))
    const double coverage = std::erf(trunc / (sigma * std::sqrt(2.0)));
    const double peak = (kPi / 2.0) / (sigma * std::sqrt(2.0 * kPi) * coverage);

    const PairParams nearly_degenerate = PairParams::from_omega(1e-4, 10.0);
    Schedule gaussian{nearly_degenerate, {Pulse::gaussian(peak, fwhm, trunc)}};
    const ComplexMatrix num =
        propagate_schedule(gaussian, Subspace::logical2, PropagateOptions{4096});

    // square pulse of equal area at the same peak coupling
    const ComplexMatrix square =
        propagate_constant(nearly_degenerate, peak, (kPi / 2.0) / peak, Subspace::logical2);
    CHECK(fidelity_up_to_phase(num, square) >= 1.0 - 1e-6);
}

TEST_CASE("bloch trajectory of an eigenstate stays put") {
    Schedule s{kUnitOmega, {Pulse::square(0.0, 3.0)}};
    const auto samples = bloch_trajectory(s, {1.0, 0.0}, 32);
    CHECK(samples.size() == 32);
    for (const auto& pt : samples) {
        CHECK(std::abs(pt.bx) <= 1e-12);
        CHECK(std::abs(pt.by) <= 1e-12);
        CHECK(pt.bz == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(pt.p00 == 0.0);
        CHECK(pt.p11 == 0.0);
    }
}

TEST_CASE("bloch trajectory precesses at 2*omega in the equatorial plane") {
    Schedule s{kUnitOmega, {Pulse::square(0.0, kPi)}};
    const double amp = 1.0 / std::sqrt(2.0);
    const auto samples = bloch_trajectory(s, {amp, amp}, 65);
    for (const auto& pt : samples) {
        CHECK(pt.bx == doctest::Approx(std::cos(2.0 * pt.time)).epsilon(1e-10));
        CHECK(pt.by == doctest::Approx(std::sin(2.0 * pt.time)).epsilon(1e-10));
        CHECK(std::abs(pt.bz) <= 1e-12);
    }
}

TEST_CASE("bloch trajectory preserves the norm at every sample") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Schedule s{kUnitOmega,
               {Pulse::square(0.4, 1.3), Pulse::square(0.0, 0.7), Pulse::square(0.8, 2.1)}};
    for (int rep = 0; rep < 5; ++rep) {
        const double a = dist(rng);
        const cdouble c0{std::sqrt(a), 0.0};
        const cdouble c1 = std::polar(std::sqrt(1.0 - a), 2.0 * kPi * dist(rng));
        for (const auto& pt : bloch_trajectory(s, {c0, c1}, 41)) {
            const double bloch_norm =
                std::sqrt(pt.bx * pt.bx + pt.by * pt.by + pt.bz * pt.bz);
            CHECK(bloch_norm == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(pt.p00 + pt.p11 <= 1e-24);  // block structure: no leakage ever
        }
    }
}
