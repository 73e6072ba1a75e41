#pragma once

#include <functional>
#include <vector>

#include "abchain/matrix.hpp"
#include "abchain/spin_model.hpp"

namespace abchain {

// One constant-strength segment of exchange coupling, or a truncated
// Gaussian envelope integrated numerically.
struct Pulse {
    enum class Shape { square, gaussian };

    Shape shape = Shape::square;
    double j = 0.0;         // square: the J value; gaussian: the peak
    double duration = 0.0;  // gaussian: 2 * truncation half-width
    double fwhm = 0.0;      // gaussian only

    static Pulse square(double j, double duration) {
        return Pulse{Shape::square, j, duration, 0.0};
    }
    // Truncation half-width must be at least 2*fwhm; the envelope spans
    // [0, 2*truncation] with the peak centered.
    static Pulse gaussian(double peak, double fwhm, double truncation);

    // Envelope value at local time s in [0, duration].
    double value_at(double s) const;
    // Area cut off by truncating the Gaussian tails (exact, via erf).
    double truncated_tail_area() const;

    void validate(const PairParams& params) const;
};

// Ordered pulse list for one pair; applied left to right in time.
// The corresponding unitary is U_n ... U_2 U_1 (rightmost acts first).
struct Schedule {
    PairParams params;
    std::vector<Pulse> pulses;

    double total_duration() const;
    void validate() const;
};

enum class Subspace { logical2, full4 };

struct PropagateOptions {
    int waveform_steps = 1024;  // per gaussian pulse
};

// Analytic constant-J propagator. On the logical block this is the
// rotation by 2*omega'*t about the tilted axis; the full 4x4 adds the
// exact phases exp(-i(-W+K)t), exp(-i(W+K)t) on the outer diagonal.
// No eigensolver involved.
ComplexMatrix propagate_constant(const PairParams& params, double j, double t,
                                 Subspace subspace);

ComplexMatrix propagate_schedule(const Schedule& schedule, Subspace subspace,
                                 const PropagateOptions& opts = {});

// Second-order midpoint product integrator for an arbitrary waveform:
// U = prod_k exp(-i H(J(t_k + dt/2)) dt). Requires steps >= 16.
ComplexMatrix propagate_waveform(const PairParams& params,
                                 const std::function<double(double)>& j_of_t,
                                 double t_total, int steps, Subspace subspace);

struct TrajectorySample {
    double time;
    double bx, by, bz;    // logical Bloch vector
    double p00, p11;      // population outside the logical subspace
};

// Samples the state at `samples` uniform times (endpoints included)
// starting from a normalized logical 2-vector.
std::vector<TrajectorySample> bloch_trajectory(const Schedule& schedule,
                                               const cvector& initial_logical,
                                               int samples,
                                               const PropagateOptions& opts = {});

}  // namespace abchain
