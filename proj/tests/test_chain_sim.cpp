#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abchain/chain_sim.hpp"
#include "abchain/compiler.hpp"
#include "abchain/errors.hpp"
#include "abchain/linalg.hpp"

using namespace abchain;

namespace {

constexpr double kPi = std::numbers::pi;
const PairParams kUnitOmega = PairParams::from_omega(1.0, 0.5 * std::sqrt(3.0), 2.0);

ChainState random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    ChainState s;
    s.n_spins = n;
    s.amplitudes.resize(std::size_t{1} << n);
    double norm2 = 0.0;
    for (auto& a : s.amplitudes) {
        a = cdouble{gauss(rng), gauss(rng)};
        norm2 += std::norm(a);
    }
    for (auto& a : s.amplitudes) a /= std::sqrt(norm2);
    return s;
}

ChainSchedule random_schedule(const ChainParams& chain, std::mt19937_64& rng,
                              bool pair_internal_only) {
    std::uniform_real_distribution<double> dist(0.1, 1.5);
    std::uniform_int_distribution<int> bond_pick(0, chain.n_spins() - 2);
    ChainSchedule schedule{chain, {}};
    const int segments = 1 + static_cast<int>(dist(rng) * 2);
    for (int s = 0; s < segments; ++s) {
        int bond = bond_pick(rng);
        if (pair_internal_only) bond -= bond % 2;
        ChainSegment seg;
        seg.bond_j.assign(chain.bond_couplings.size(), 0.0);
        seg.bond_j[bond] = dist(rng);
        seg.duration = dist(rng);
        schedule.segments.push_back(seg);
    }
    return schedule;
}

}  // namespace

TEST_CASE("all-off chain evolution only shifts phases") {
    const ChainParams chain = ChainParams::alternating(4, 3.0, 1.0);
    ChainSchedule schedule{chain, {ChainSegment{{0, 0, 0}, 2.3}}};
    const ChainState in = ChainState::basis(4, 0b0110);
    const ChainState out = propagate_chain(schedule, in);
    for (std::size_t x = 0; x < out.amplitudes.size(); ++x) {
        if (x == 0b0110)
            CHECK(std::abs(std::abs(out.amplitudes[x]) - 1.0) <= 1e-12);
        else
            CHECK(std::abs(out.amplitudes[x]) == 0.0);
    }
}

TEST_CASE("two-spin chain propagation matches the pair propagator") {
    std::mt19937_64 rng(61);
    const PairParams wide{3.0, 1.0, 2.0};
    ChainParams chain = ChainParams::alternating(2, wide.a, wide.b);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_real_distribution<double> dist(0.1, 1.2);
        const double j = dist(rng), t = dist(rng);
        ChainSchedule schedule{chain, {ChainSegment{{j}, t}}};
        const ChainState in = random_state(2, rng);

        const ChainState out = propagate_chain(schedule, in);
        const cvector expect =
            propagate_constant(wide, j, t, Subspace::full4) * in.amplitudes;
        for (std::size_t x = 0; x < 4; ++x)
            CHECK(std::abs(out.amplitudes[x] - expect[x]) <= 1e-11);
    }
}

TEST_CASE("norm and magnetization sector masses are conserved") {
    std::mt19937_64 rng(62);
    for (int n : {4, 6}) {
        const ChainParams chain = ChainParams::alternating(n, 3.0, 1.0);
        for (int rep = 0; rep < 50; ++rep) {
            const ChainSchedule schedule = random_schedule(chain, rng, false);
            const ChainState in = random_state(n, rng);
            const auto before = magnetization_spectrum(in);
            const ChainState out = propagate_chain(schedule, in);
            CHECK(std::abs(out.norm() - 1.0) <= 1e-11);
            const auto after = magnetization_spectrum(out);
            for (std::size_t k = 0; k < before.size(); ++k)
                CHECK(std::abs(after[k] - before[k]) <= 1e-11);
        }
    }
}

TEST_CASE("pair-internal bonds never leak into |00>/|11> of any pair") {
    std::mt19937_64 rng(63);
    const ChainParams chain = ChainParams::alternating(4, 3.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const ChainSchedule schedule = random_schedule(chain, rng, true);
        const ChainState out =
            propagate_chain(schedule, ChainState::all_logical_zero(4));
        for (int pair = 0; pair < 2; ++pair) {
            const ComplexMatrix rho = pair_reduced_density(out, pair);
            CHECK(rho(0, 0).real() <= 1e-12);
            CHECK(rho(3, 3).real() <= 1e-12);
        }
    }
}

TEST_CASE("logical_extract on the identity and on a compiled Hadamard") {
    const LogicalBlock id = logical_extract(ComplexMatrix::identity(16), 0);
    CHECK(id.leakage <= 1e-15);
    CHECK(max_abs_diff(id.block, ComplexMatrix::identity(2)) <= 1e-14);

    // n = 2 chain running the single-pulse Hadamard schedule
    const Schedule h = compile_hadamard(kUnitOmega);
    const ChainParams chain = ChainParams::alternating(2, kUnitOmega.a, kUnitOmega.b);
    const ChainSchedule embedded =
        embed_on_bond(chain, 0, {{h.pulses[0].j, h.pulses[0].duration}});
    const LogicalBlock block = logical_extract(propagate_chain_unitary(embedded), 0);
    CHECK(block.leakage <= 1e-12);
    ComplexMatrix hadamard(2);
    const double s = 1.0 / std::sqrt(2.0);
    hadamard(0, 0) = s;
    hadamard(0, 1) = s;
    hadamard(1, 0) = s;
    hadamard(1, 1) = -s;
    CHECK(fidelity_up_to_phase(block.block, hadamard) >= 1.0 - 1e-11);
}

TEST_CASE("random schedules on a pair's own bond extract with negligible leakage") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> dist(0.1, 1.5);
    const ChainParams chain = ChainParams::alternating(4, 3.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        const int pair = rep % 2;
        std::vector<std::pair<double, double>> jt;
        for (int s = 0; s < 1 + rep % 3; ++s) jt.emplace_back(dist(rng), dist(rng));
        const ComplexMatrix u =
            propagate_chain_unitary(embed_on_bond(chain, 2 * pair, jt));
        // the pulsed pair's own block loses no mass; spectators only
        // pick up z phases on the reference state
        CHECK(logical_extract(u, pair).leakage <= 1e-12);
    }
}

TEST_CASE("spectator pairs see only a global phase from frame-synced gates") {
    std::mt19937_64 rng(65);
    std::uniform_real_distribution<double> angle(0.2, 2.0 * kPi);
    for (int n : {4, 6}) {
        const ChainParams chain = ChainParams::alternating(n, kUnitOmega.a, kUnitOmega.b);
        for (int rep = 0; rep < 4; ++rep) {
            GateSpec spec{RotationY{angle(rng)}, {}};
            spec.options.frame_sync = true;
            const CompileResult compiled = compile_gate(spec, kUnitOmega);
            REQUIRE(compiled.report.converged);

            std::vector<std::pair<double, double>> jt;
            for (const auto& p : compiled.schedule.pulses)
                jt.emplace_back(p.j, p.duration);
            const ChainSchedule embedded = embed_on_bond(chain, 0, jt);

            // active pair realizes the gate: unitary-level extraction
            const ComplexMatrix u = propagate_chain_unitary(embedded);
            const LogicalBlock active = logical_extract(u, 0);
            CHECK(active.leakage <= 1e-10);
            CHECK(fidelity_up_to_phase(active.block, compiled.target) >= 1.0 - 1e-8);

            // product state: active pair in |0>_L, every spectator in a
            // z-sensitive superposition (|0>_L + |1>_L)/sqrt(2)
            ChainState state;
            state.n_spins = n;
            state.amplitudes.assign(std::size_t{1} << n, cdouble{});
            const double amp = std::pow(0.5, 0.5 * (n / 2 - 1));
            for (std::size_t x = 0; x < state.amplitudes.size(); ++x) {
                double coeff = amp;
                bool valid = true;
                for (int p = 0; p < n / 2 && valid; ++p) {
                    const unsigned local = (x >> (2 * p)) & 0b11u;
                    if (p == 0)
                        valid = local == 0b01u;  // |0>_L
                    else
                        valid = local == 0b01u || local == 0b10u;
                }
                if (valid) state.amplitudes[x] = coeff;
            }
            REQUIRE(std::abs(state.norm() - 1.0) <= 1e-12);

            const ChainState out = propagate_chain(embedded, state);
            for (int pair = 1; pair < n / 2; ++pair) {
                // reduced action: the spectator comes back to its
                // initial pure state up to a global phase
                const ComplexMatrix rho = pair_reduced_density(out, pair);
                const double overlap =
                    0.5 * (rho(1, 1) + rho(1, 2) + rho(2, 1) + rho(2, 2)).real();
                CHECK(overlap >= 1.0 - 1e-8);
            }
        }
    }
}

TEST_CASE("back-to-back schedules compose like their concatenation") {
    std::mt19937_64 rng(66);
    const ChainParams chain = ChainParams::alternating(4, 3.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const ChainSchedule first = random_schedule(chain, rng, false);
        const ChainSchedule second = random_schedule(chain, rng, false);
        ChainSchedule joined{chain, first.segments};
        joined.segments.insert(joined.segments.end(), second.segments.begin(),
                               second.segments.end());

        const ChainState in = random_state(4, rng);
        const ChainState two_step = propagate_chain(second, propagate_chain(first, in));
        const ChainState one_step = propagate_chain(joined, in);
        for (std::size_t x = 0; x < one_step.amplitudes.size(); ++x)
            CHECK(std::abs(two_step.amplitudes[x] - one_step.amplitudes[x]) <= 1e-10);
    }
}

TEST_CASE("magnetization_spectrum named cases") {
    const auto spectrum = magnetization_spectrum(ChainState::basis(4, 0b0101));
    CHECK(spectrum.size() == 5);
    CHECK(spectrum[2] == doctest::Approx(1.0));
    for (std::size_t k : {0u, 1u, 3u, 4u}) CHECK(spectrum[k] == 0.0);

    // uniform superposition of |01> and |10> on one pair: single sector
    ChainState pair;
    pair.n_spins = 2;
    pair.amplitudes = {0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const auto pair_spectrum = magnetization_spectrum(pair);
    CHECK(pair_spectrum[1] == doctest::Approx(1.0).epsilon(1e-12));
    double total = 0.0;
    for (double m : pair_spectrum) total += m;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chain schedule validation") {
    const ChainParams chain = ChainParams::alternating(4, 3.0, 1.0);
    ChainSchedule two_bonds{chain, {ChainSegment{{0.5, 0.5, 0.0}, 1.0}}};
    CHECK_THROWS_AS(two_bonds.validate(), UnsupportedConfiguration);

    ChainSchedule bad_duration{chain, {ChainSegment{{0.5, 0.0, 0.0}, 0.0}}};
    CHECK_THROWS_AS(bad_duration.validate(), std::invalid_argument);

    CHECK_THROWS_AS(propagate_chain_unitary(ChainSchedule{
                        ChainParams::alternating(13, 2.0, 1.0), {}}),
                    CapacityExceeded);
}
