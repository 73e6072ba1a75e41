#pragma once

#include <stdexcept>
#include <string>

namespace abchain {

// J outside [0, j_max], negative couplings, and similar parameter-range
// breaks.
class DomainViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Dense-representation guard (chains beyond 12 spins) and unreachable
// compile requests.
class CapacityExceeded : public std::runtime_error {
public:
    explicit CapacityExceeded(const std::string& what, int minimal_feasible = -1)
        : std::runtime_error(what), minimal_feasible_(minimal_feasible) {}
    // Minimal feasible pair/pulse count when known, -1 otherwise.
    int minimal_feasible() const { return minimal_feasible_; }

private:
    int minimal_feasible_;
};

// Operation requested in a regime the architecture does not support
// (e.g. SWAP with omega != 0).
class UnsupportedConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Logical-subspace bookkeeping broke down; indicates a bug upstream.
class SubspaceViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace abchain
