#pragma once

namespace abchain {

// Achieved unitary vs target, plus the bookkeeping callers print.
struct FidelityReport {
    double fidelity = 0.0;
    double total_duration = 0.0;
    int pulse_count = 0;
    double leakage = 0.0;
    double frame_residual = 0.0;  // distance of omega*tau from 2*pi*Z
    bool converged = false;
};

}  // namespace abchain
