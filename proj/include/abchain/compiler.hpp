#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "abchain/matrix.hpp"
#include "abchain/propagator.hpp"
#include "abchain/report.hpp"
#include "abchain/spin_model.hpp"

namespace abchain {

struct CompileOptions {
    // Coupling bound used by the compiler; defaults to the pair's j_max.
    std::optional<double> j_max;
    bool frame_sync = false;
    double tolerance = 1e-9;
    int max_pairs = 3;

    double effective_j_max(const PairParams& params) const {
        return j_max.value_or(params.j_max);
    }
};

// Requested logical operations.
struct RotationZ { double angle; };
struct RotationY { double angle; };
struct RotationTilted { double theta; double angle; };
struct HadamardGate {};
struct ArbitraryGate { ComplexMatrix unitary; };
struct SwapGate { double j; };
struct NnorGate {
    int n_pulses = 2;
    int seeds = 64;
    std::uint64_t rng_seed = 0;
    double tolerance = 1e-6;
};

struct GateSpec {
    std::variant<RotationZ, RotationY, RotationTilted, HadamardGate, ArbitraryGate,
                 SwapGate, NnorGate> kind;
    CompileOptions options;
};

// ZYZ factorization U = e^{i phase} Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
    double alpha = 0.0;  // in [0, 2pi)
    double beta = 0.0;   // in [0, pi]
    double gamma = 0.0;  // in [0, 2pi)
    double global_phase = 0.0;
};

struct CompileResult {
    Schedule schedule;
    FidelityReport report;
    ComplexMatrix target;  // logical 2x2 the schedule was verified against
};

EulerAngles euler_decompose(const ComplexMatrix& u);

// Single J=0 pulse of duration psi/(2*omega); empty for psi ≡ 0 (mod 4pi).
Schedule compile_rotation_z(const PairParams& params, double angle);

// Concatenated [Rz(pi), tilted pi-pulse] pairs; each pair contributes a
// y rotation by twice the tilt angle.
Schedule compile_rotation_y(const PairParams& params, double angle,
                            const CompileOptions& options = {});

// One pulse rotating by `angle` about the axis tilted `theta` from z.
Schedule compile_rotation_tilted(const PairParams& params, double theta, double angle,
                                 const CompileOptions& options = {});

// Single-pulse Hadamard: J = omega/2, t = pi/(2*sqrt(2)*omega).
Schedule compile_hadamard(const PairParams& params);

// Three-pulse tilted/z/tilted palindrome at theta = pi/4; a one-period
// shorter alternative that realizes an x-axis pi rotation.
Schedule compile_x_pi_sandwich(const PairParams& params, const CompileOptions& options = {});

// Single pulse (J, t = pi/(4J)); requires omega = 0.
Schedule compile_swap(const PairParams& params, double j);

// Appends full-2pi pulses until omega * total_duration is an integer
// multiple of 2pi, leaving the pair's own unitary unchanged up to phase.
Schedule frame_sync_pad(const Schedule& schedule, const PairParams& params,
                        double j_max);

double frame_residual(double omega, double total_duration);

CompileResult compile_gate(const GateSpec& spec, const PairParams& params);

}  // namespace abchain
