#include "abchain/chain_sim.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "abchain/errors.hpp"
#include "abchain/kernels.hpp"

namespace abchain {

ChainState ChainState::basis(int n_spins, unsigned bits) {
    ChainState s;
    s.n_spins = n_spins;
    s.amplitudes.assign(std::size_t{1} << n_spins, cdouble{});
    s.amplitudes.at(bits) = 1.0;
    return s;
}

ChainState ChainState::all_logical_zero(int n_spins) {
    if (n_spins % 2 != 0)
        throw std::invalid_argument("logical encoding needs an even spin count");
    unsigned bits = 0;
    for (int p = 0; p < n_spins / 2; ++p) bits |= 1u << (2 * p);
    return basis(n_spins, bits);
}

double ChainState::norm() const {
    double n2 = 0.0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    return std::sqrt(n2);
}

void ChainState::validate() const {
    if (amplitudes.size() != (std::size_t{1} << n_spins))
        throw std::invalid_argument("chain state size does not match spin count");
    if (std::abs(norm() - 1.0) > 1e-12)
        throw std::invalid_argument("chain state is not normalized");
}

double ChainSchedule::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

void ChainSchedule::validate() const {
    chain.validate();
    if (chain.n_spins() > kMaxChainSpins)
        throw CapacityExceeded("chain schedule beyond " +
                               std::to_string(kMaxChainSpins) + " spins");
    for (const auto& seg : segments) {
        if (!(seg.duration > 0.0))
            throw std::invalid_argument("chain segment duration must be > 0");
        if (seg.bond_j.size() != chain.bond_couplings.size())
            throw std::invalid_argument("chain segment bond count mismatch");
        int active = 0;
        for (double j : seg.bond_j) {
            if (!(j >= 0.0)) throw DomainViolation("bond coupling must be >= 0");
            if (j > 0.0) ++active;
        }
        if (active > 1)
            throw UnsupportedConfiguration(
                "at most one active bond per segment is supported");
    }
}

namespace {

struct EighCache {
    // Keyed by the bond snapshot; the chain energies are fixed per run.
    std::map<std::vector<double>, std::pair<std::vector<double>, ComplexMatrix>> entries;

    const std::pair<std::vector<double>, ComplexMatrix>& get(const ChainParams& chain,
                                                             const std::vector<double>& bond_j) {
        auto it = entries.find(bond_j);
        if (it != entries.end()) return it->second;

        ChainParams with_bonds = chain;
        with_bonds.bond_couplings = bond_j;
        ComplexMatrix h = chain_hamiltonian(with_bonds);
        const std::size_t dim = h.dim();
        std::vector<double> vals(dim);
        ComplexMatrix vecs(dim);
        kernels::eigh(h.data(), vals.data(), vecs.data(), dim);
        return entries.emplace(bond_j, std::make_pair(std::move(vals), std::move(vecs)))
            .first->second;
    }
};

}  // namespace

ChainState propagate_chain(const ChainSchedule& schedule, ChainState state) {
    schedule.validate();
    state.validate();
    if (state.n_spins != schedule.chain.n_spins())
        throw std::invalid_argument("state/chain spin count mismatch");

    const std::size_t dim = state.amplitudes.size();
    EighCache cache;
    cvector work(dim);
    for (const auto& seg : schedule.segments) {
        const auto& [vals, vecs] = cache.get(schedule.chain, seg.bond_j);
        // psi <- V exp(-i vals t) V† psi
        const ComplexMatrix vdag = adjoint(vecs);
        kernels::matvec(vdag.data(), state.amplitudes.data(), work.data(), dim);
        for (std::size_t i = 0; i < dim; ++i)
            work[i] *= std::polar(1.0, -vals[i] * seg.duration);
        kernels::matvec(vecs.data(), work.data(), state.amplitudes.data(), dim);
    }
    return state;
}

ComplexMatrix propagate_chain_unitary(const ChainSchedule& schedule) {
    schedule.validate();
    const std::size_t dim = std::size_t{1} << schedule.chain.n_spins();
    ComplexMatrix u = ComplexMatrix::identity(dim);
    EighCache cache;
    for (const auto& seg : schedule.segments) {
        const auto& [vals, vecs] = cache.get(schedule.chain, seg.bond_j);
        ComplexMatrix step(dim);
        kernels::evolve_from_eigh(vecs.data(), vals.data(), seg.duration, step.data(), dim);
        u = step * u;
    }
    return u;
}

LogicalBlock logical_extract(const ComplexMatrix& u_chain, int pair_index) {
    std::size_t dim = u_chain.dim();
    int n_spins = 0;
    while ((std::size_t{1} << n_spins) < dim) ++n_spins;
    if ((std::size_t{1} << n_spins) != dim)
        throw std::invalid_argument("logical_extract: dimension is not a power of 2");
    const int n_pairs = n_spins / 2;
    if (n_spins % 2 != 0 || pair_index < 0 || pair_index >= n_pairs)
        throw std::invalid_argument("logical_extract: bad pair index");

    // Spectator pairs pinned to |0>_L = excitation on the even site.
    unsigned reference = 0;
    for (int p = 0; p < n_pairs; ++p)
        if (p != pair_index) reference |= 1u << (2 * p);

    const auto basis_index = [&](int logical) -> std::size_t {
        const unsigned local = logical == 0 ? 0b01u : 0b10u;
        return reference | (local << (2 * pair_index));
    };

    LogicalBlock out;
    out.block = ComplexMatrix(2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            out.block(r, c) = u_chain(basis_index(r), basis_index(c));

    double min_captured = 1.0;
    for (int c = 0; c < 2; ++c) {
        const double captured =
            std::norm(out.block(0, c)) + std::norm(out.block(1, c));
        min_captured = std::min(min_captured, captured);
    }
    out.leakage = 1.0 - min_captured;

    if (out.leakage > 1e-3)
        throw SubspaceViolation("logical_extract: leakage " +
                                std::to_string(out.leakage) +
                                " exceeds 1e-3; upstream propagation is broken");
    if (out.leakage <= 1e-8) {
        for (int c = 0; c < 2; ++c) {
            const double captured =
                std::sqrt(std::norm(out.block(0, c)) + std::norm(out.block(1, c)));
            if (captured > 0.0) {
                out.block(0, c) /= captured;
                out.block(1, c) /= captured;
            }
        }
    }
    return out;
}

std::vector<double> magnetization_spectrum(const ChainState& state) {
    state.validate();
    std::vector<double> mass(state.n_spins + 1, 0.0);
    for (std::size_t x = 0; x < state.amplitudes.size(); ++x)
        mass[std::popcount(x)] += std::norm(state.amplitudes[x]);
    return mass;
}

ComplexMatrix pair_reduced_density(const ChainState& state, int pair_index) {
    state.validate();
    const int n_pairs = state.n_spins / 2;
    if (state.n_spins % 2 != 0 || pair_index < 0 || pair_index >= n_pairs)
        throw std::invalid_argument("pair_reduced_density: bad pair index");

    const int shift = 2 * pair_index;
    const std::size_t pair_mask = std::size_t{0b11} << shift;
    ComplexMatrix rho(4);
    for (std::size_t x = 0; x < state.amplitudes.size(); ++x) {
        const cdouble ax = state.amplitudes[x];
        if (ax == cdouble{}) continue;
        const std::size_t local_x = (x & pair_mask) >> shift;
        const std::size_t spec = x & ~pair_mask;
        for (std::size_t local_y = 0; local_y < 4; ++local_y) {
            const cdouble ay = state.amplitudes[spec | (local_y << shift)];
            rho(local_x, local_y) += ax * std::conj(ay);
        }
    }
    return rho;
}

ChainSchedule embed_on_bond(const ChainParams& chain, int bond,
                            const std::vector<std::pair<double, double>>& j_t_list) {
    if (bond < 0 || bond + 1 >= chain.n_spins())
        throw std::invalid_argument("embed_on_bond: bad bond index");
    ChainSchedule schedule{chain, {}};
    for (const auto& [j, t] : j_t_list) {
        ChainSegment seg;
        seg.bond_j.assign(chain.bond_couplings.size(), 0.0);
        seg.bond_j[bond] = j;
        seg.duration = t;
        schedule.segments.push_back(std::move(seg));
    }
    return schedule;
}

}  // namespace abchain
