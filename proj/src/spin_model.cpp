#include "abchain/spin_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "abchain/errors.hpp"

namespace abchain {

namespace {

void check_coupling(const PairParams& params, double j) {
    if (!(j >= 0.0) || j > params.j_max)
        throw DomainViolation("coupling J = " + std::to_string(j) +
                              " outside [0, " + std::to_string(params.j_max) + "]");
}

}  // namespace

ChainParams ChainParams::alternating(int n_spins, double a, double b) {
    ChainParams c;
    c.site_energies.resize(n_spins);
    for (int i = 0; i < n_spins; ++i) c.site_energies[i] = (i % 2 == 0) ? a : b;
    c.bond_couplings.assign(n_spins - 1, 0.0);
    return c;
}

void ChainParams::validate() const {
    if (n_spins() < 2) throw std::invalid_argument("chain needs at least 2 spins");
    if (bond_couplings.size() + 1 != site_energies.size())
        throw std::invalid_argument("chain needs exactly n_spins - 1 bond couplings");
    for (double j : bond_couplings)
        if (!(j >= 0.0)) throw DomainViolation("bond couplings must be >= 0");
}

ComplexMatrix pair_hamiltonian(const PairParams& params, double j) {
    check_coupling(params, j);
    const double w = params.omega();
    const double w_large = params.omega_large();
    const double k = 2.0 * j;

    ComplexMatrix h(4);
    h(0, 0) = -w_large + k;
    h(1, 1) = w;
    h(1, 2) = k;
    h(2, 1) = k;
    h(2, 2) = -w;
    h(3, 3) = w_large + k;
    return h;
}

ComplexMatrix logical_hamiltonian(const PairParams& params, double j) {
    check_coupling(params, j);
    const double w = params.omega();
    const double k = 2.0 * j;
    ComplexMatrix h(2);
    h(0, 0) = w;
    h(0, 1) = k;
    h(1, 0) = k;
    h(1, 1) = -w;
    return h;
}

PrecessionAxis axis_and_rate(const PairParams& params, double j) {
    check_coupling(params, j);
    const double w = params.omega();
    if (!(w > 0.0))
        throw DomainViolation("axis_and_rate requires omega > 0 (axis degenerates)");
    const double k = 2.0 * j;
    const double w_eff = std::hypot(w, k);
    return PrecessionAxis{{k / w_eff, 0.0, w / w_eff}, 2.0 * w_eff};
}

ComplexMatrix chain_hamiltonian(const ChainParams& chain) {
    chain.validate();
    const int n = chain.n_spins();
    if (n > kMaxChainSpins)
        throw CapacityExceeded("chain_hamiltonian: dense representation capped at " +
                               std::to_string(kMaxChainSpins) + " spins");

    const std::size_t dim = std::size_t{1} << n;
    double shift = 0.0;
    for (double j : chain.bond_couplings) shift += j;

    ComplexMatrix h(dim);
    for (std::size_t x = 0; x < dim; ++x) {
        double diag = shift;
        for (int i = 0; i < n; ++i) {
            const double z = ((x >> i) & 1u) ? -1.0 : 1.0;
            diag -= 0.5 * chain.site_energies[i] * z;
        }
        for (int b = 0; b + 1 < n; ++b) {
            const double jb = chain.bond_couplings[b];
            if (jb == 0.0) continue;
            const double zi = ((x >> b) & 1u) ? -1.0 : 1.0;
            const double zj = ((x >> (b + 1)) & 1u) ? -1.0 : 1.0;
            diag += jb * zi * zj;
            // flip-flop part: 2J on antiparallel neighbors
            if (zi * zj < 0.0) h(x, x ^ (std::size_t{3} << b)) = 2.0 * jb;
        }
        h(x, x) = diag;
    }
    return h;
}

}  // namespace abchain
