#include "abchain/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "abchain/errors.hpp"

namespace abchain {

namespace {

constexpr cdouble kI{0.0, 1.0};

// exp(-i (w sigma_z + k sigma_x) t), closed form.
void logical_block(double w, double k, double t, cdouble out[2][2]) {
    const double w_eff = std::hypot(w, k);
    const double c = std::cos(w_eff * t);
    const double s = std::sin(w_eff * t);
    double nx = 0.0, nz = 1.0;
    if (w_eff > 0.0) {
        nx = k / w_eff;
        nz = w / w_eff;
    }
    out[0][0] = c - kI * s * nz;
    out[0][1] = -kI * s * nx;
    out[1][0] = -kI * s * nx;
    out[1][1] = c + kI * s * nz;
}

}  // namespace

Pulse Pulse::gaussian(double peak, double fwhm, double truncation) {
    if (!(fwhm > 0.0)) throw std::invalid_argument("gaussian pulse: fwhm must be > 0");
    if (!(truncation >= 2.0 * fwhm))
        throw std::invalid_argument("gaussian pulse: truncation must be >= 2*fwhm");
    return Pulse{Shape::gaussian, peak, 2.0 * truncation, fwhm};
}

double Pulse::value_at(double s) const {
    if (shape == Shape::square) return j;
    const double center = 0.5 * duration;
    const double x = s - center;
    return j * std::exp(-4.0 * std::numbers::ln2 * x * x / (fwhm * fwhm));
}

double Pulse::truncated_tail_area() const {
    if (shape == Shape::square) return 0.0;
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double half_width = 0.5 * duration;
    const double full_area = j * sigma * std::sqrt(2.0 * std::numbers::pi);
    return full_area * std::erfc(half_width / (sigma * std::sqrt(2.0)));
}

void Pulse::validate(const PairParams& params) const {
    if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be > 0");
    if (!(j >= 0.0) || j > params.j_max)
        throw DomainViolation("pulse J = " + std::to_string(j) + " outside [0, " +
                              std::to_string(params.j_max) + "]");
    if (shape == Shape::gaussian && !(fwhm > 0.0))
        throw std::invalid_argument("gaussian pulse: fwhm must be > 0");
}

double Schedule::total_duration() const {
    double t = 0.0;
    for (const auto& p : pulses) t += p.duration;
    return t;
}

void Schedule::validate() const {
    for (const auto& p : pulses) p.validate(params);
}

ComplexMatrix propagate_constant(const PairParams& params, double j, double t,
                                 Subspace subspace) {
    if (t < 0.0) throw std::invalid_argument("propagate_constant: t must be >= 0");
    if (!(j >= 0.0) || j > params.j_max)
        throw DomainViolation("propagate_constant: J outside [0, j_max]");

    const double w = params.omega();
    const double k = 2.0 * j;
    cdouble block[2][2];
    logical_block(w, k, t, block);

    if (subspace == Subspace::logical2) {
        ComplexMatrix u(2);
        u(0, 0) = block[0][0];
        u(0, 1) = block[0][1];
        u(1, 0) = block[1][0];
        u(1, 1) = block[1][1];
        return u;
    }

    const double w_large = params.omega_large();
    ComplexMatrix u(4);
    u(0, 0) = std::polar(1.0, -(-w_large + k) * t);
    u(1, 1) = block[0][0];
    u(1, 2) = block[0][1];
    u(2, 1) = block[1][0];
    u(2, 2) = block[1][1];
    u(3, 3) = std::polar(1.0, -(w_large + k) * t);
    return u;
}

ComplexMatrix propagate_schedule(const Schedule& schedule, Subspace subspace,
                                 const PropagateOptions& opts) {
    schedule.validate();
    const std::size_t dim = subspace == Subspace::logical2 ? 2 : 4;
    ComplexMatrix u = ComplexMatrix::identity(dim);
    for (const auto& pulse : schedule.pulses) {
        ComplexMatrix step;
        if (pulse.shape == Pulse::Shape::square) {
            step = propagate_constant(schedule.params, pulse.j, pulse.duration, subspace);
        } else {
            step = propagate_waveform(
                schedule.params, [&pulse](double s) { return pulse.value_at(s); },
                pulse.duration, opts.waveform_steps, subspace);
        }
        u = step * u;
    }
    return u;
}

ComplexMatrix propagate_waveform(const PairParams& params,
                                 const std::function<double(double)>& j_of_t,
                                 double t_total, int steps, Subspace subspace) {
    if (steps < 16) throw std::invalid_argument("propagate_waveform: steps must be >= 16");
    if (!(t_total > 0.0)) throw std::invalid_argument("propagate_waveform: t_total must be > 0");

    const double dt = t_total / steps;
    const std::size_t dim = subspace == Subspace::logical2 ? 2 : 4;
    ComplexMatrix u = ComplexMatrix::identity(dim);
    for (int k = 0; k < steps; ++k) {
        const double j_mid = j_of_t((k + 0.5) * dt);
        if (!(j_mid >= 0.0) || j_mid > params.j_max)
            throw DomainViolation("propagate_waveform: waveform leaves [0, j_max]");
        u = propagate_constant(params, j_mid, dt, subspace) * u;
    }
    return u;
}

std::vector<TrajectorySample> bloch_trajectory(const Schedule& schedule,
                                               const cvector& initial_logical,
                                               int samples,
                                               const PropagateOptions& opts) {
    if (initial_logical.size() != 2)
        throw std::invalid_argument("bloch_trajectory: initial state must be a logical 2-vector");
    const double norm = std::sqrt(std::norm(initial_logical[0]) + std::norm(initial_logical[1]));
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::invalid_argument("bloch_trajectory: initial state must be normalized");
    if (samples < 2) throw std::invalid_argument("bloch_trajectory: samples must be >= 2");
    schedule.validate();

    // Embed into the full 4-dim pair so leakage populations are observable.
    cvector psi(4);
    psi[1] = initial_logical[0];
    psi[2] = initial_logical[1];

    const double t_total = schedule.total_duration();
    std::vector<TrajectorySample> out;
    out.reserve(samples);

    std::size_t pulse_idx = 0;
    double pulse_start = 0.0;    // schedule time where the current pulse begins
    double evolved_in_pulse = 0.0;
    cvector current = psi;

    auto advance_within_pulse = [&](const Pulse& pulse, double from, double to) {
        if (to <= from) return;
        ComplexMatrix step;
        if (pulse.shape == Pulse::Shape::square) {
            step = propagate_constant(schedule.params, pulse.j, to - from, Subspace::full4);
        } else {
            // proportional share of the pulse's step budget, at least 16
            const int steps = std::max(
                16, static_cast<int>(std::ceil(opts.waveform_steps * (to - from) / pulse.duration)));
            step = propagate_waveform(
                schedule.params,
                [&pulse, from](double s) { return pulse.value_at(from + s); },
                to - from, steps, Subspace::full4);
        }
        current = step * current;
    };

    for (int i = 0; i < samples; ++i) {
        const double t = t_total * i / (samples - 1);
        // advance the state up to time t
        while (pulse_idx < schedule.pulses.size()) {
            const Pulse& pulse = schedule.pulses[pulse_idx];
            const double pulse_end = pulse_start + pulse.duration;
            if (t < pulse_end - 1e-15 * std::max(1.0, t_total)) {
                advance_within_pulse(pulse, evolved_in_pulse, t - pulse_start);
                evolved_in_pulse = t - pulse_start;
                break;
            }
            advance_within_pulse(pulse, evolved_in_pulse, pulse.duration);
            pulse_start = pulse_end;
            evolved_in_pulse = 0.0;
            ++pulse_idx;
        }

        const cdouble a = current[1], b = current[2];
        TrajectorySample s;
        s.time = t;
        s.bx = 2.0 * (std::conj(a) * b).real();
        s.by = 2.0 * (std::conj(a) * b).imag();
        s.bz = std::norm(a) - std::norm(b);
        s.p00 = std::norm(current[0]);
        s.p11 = std::norm(current[3]);
        out.push_back(s);
    }
    return out;
}

}  // namespace abchain
