#pragma once

#include <vector>

#include "abchain/matrix.hpp"
#include "abchain/spin_model.hpp"

namespace abchain {

struct ChainState {
    int n_spins = 0;
    cvector amplitudes;  // 2^n, unit norm

    // Basis state from per-site bits (site 0 = least significant bit).
    static ChainState basis(int n_spins, unsigned bits);
    // All pairs in |0>_L: excitation on every even site.
    static ChainState all_logical_zero(int n_spins);

    double norm() const;
    void validate() const;
};

// Piecewise-constant coupling pattern on a chain; each segment holds a
// full per-bond snapshot. The paper-style restriction of at most one
// active bond per segment is enforced.
struct ChainSegment {
    std::vector<double> bond_j;
    double duration = 0.0;
};

struct ChainSchedule {
    ChainParams chain;
    std::vector<ChainSegment> segments;

    double total_duration() const;
    void validate() const;
};

ChainState propagate_chain(const ChainSchedule& schedule, ChainState state);
ComplexMatrix propagate_chain_unitary(const ChainSchedule& schedule);

struct LogicalBlock {
    ComplexMatrix block;  // 2x2, renormalized when leakage is negligible
    double leakage = 0.0;
};

// Restricts a chain unitary to the designated pair's logical subspace
// with every spectator pair pinned to |0>_L.
LogicalBlock logical_extract(const ComplexMatrix& u_chain, int pair_index);

// Probability mass per total-magnetization sector, indexed by the
// number of down spins (0..n). Sums to 1.
std::vector<double> magnetization_spectrum(const ChainState& state);

// 4x4 reduced density matrix of one pair (spectators traced out), in
// the pair-local basis ordering used by pair_hamiltonian.
ComplexMatrix pair_reduced_density(const ChainState& state, int pair_index);

// Embeds a pair schedule onto one bond of a chain: segment k activates
// `bond` with the pair schedule's k-th pulse.
ChainSchedule embed_on_bond(const ChainParams& chain, int bond,
                            const std::vector<std::pair<double, double>>& j_t_list);

}  // namespace abchain
