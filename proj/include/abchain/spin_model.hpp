#pragma once

#include <array>
#include <vector>

#include "abchain/matrix.hpp"

namespace abchain {

// Physical constants of one AB spin pair: transition energies a, b
// (hbar = 1) and the hardware bound on the exchange coupling.
struct PairParams {
    double a = 0.0;
    double b = 0.0;
    double j_max = 0.0;

    double omega() const { return 0.5 * (a - b); }        // half-difference
    double omega_large() const { return 0.5 * (a + b); }  // half-sum

    // Convenience builder for the common "everything in units of omega"
    // setup: a = shift + omega, b = shift - omega.
    static PairParams from_omega(double omega, double j_max, double shift = 0.0) {
        return PairParams{shift + omega, shift - omega, j_max};
    }
};

// N-spin chain with per-site energies and per-bond couplings. Site i is
// bit i of the basis index (site 0 = least significant bit).
struct ChainParams {
    std::vector<double> site_energies;
    std::vector<double> bond_couplings;  // size n_spins - 1

    int n_spins() const { return static_cast<int>(site_energies.size()); }

    // Alternating-energy chain: even sites at energy a, odd sites at b.
    // Pair p occupies sites (2p, 2p+1) and behaves as PairParams{a, b}.
    static ChainParams alternating(int n_spins, double a, double b);
    void validate() const;
};

inline constexpr int kMaxChainSpins = 12;

// The 4x4 two-spin matrix, including the global shift J*I:
//   diag(-W+K, w, -w, W+K) with the K coupling in the middle block,
//   K = 2J, W = (a+b)/2, w = (a-b)/2.
ComplexMatrix pair_hamiltonian(const PairParams& params, double j);

// The {|01>,|10>} block of pair_hamiltonian: w*sigma_z + K*sigma_x.
ComplexMatrix logical_hamiltonian(const PairParams& params, double j);

struct PrecessionAxis {
    std::array<double, 3> axis;  // unit vector in the z-x plane
    double rate;                 // 2*omega'
};

// Rotation axis tilted by theta = arctan(2J/omega) from z toward x, and
// the angular rate 2*omega' with omega' = sqrt(omega^2 + K^2).
PrecessionAxis axis_and_rate(const PairParams& params, double j);

// Dense 2^N x 2^N chain Hamiltonian:
//   sum_i -(E_i/2) sigma_z^(i) + sum_bonds J_b sigma^(b).sigma^(b+1)
//   + (sum_b J_b) * I.
ComplexMatrix chain_hamiltonian(const ChainParams& chain);

}  // namespace abchain
