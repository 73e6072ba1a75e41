#include "abchain/compiler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "abchain/errors.hpp"
#include "abchain/linalg.hpp"
#include "abchain/nnor_search.hpp"

namespace abchain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double require_positive_omega(const PairParams& params, const char* who) {
    const double w = params.omega();
    if (!(w > 0.0))
        throw UnsupportedConfiguration(std::string(who) + " requires omega > 0");
    return w;
}

double mod_positive(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r;
}

// Tilted pi-pulse at tilt angle theta: J = (omega/2) tan(theta),
// duration pi/(2*omega') with omega' = omega/cos(theta).
Pulse tilted_pi_pulse(double omega, double theta) {
    const double j = 0.5 * omega * std::tan(theta);
    const double t = kPi * std::cos(theta) / (2.0 * omega);
    return Pulse::square(j, t);
}

Pulse z_pulse(double omega, double angle) {
    return Pulse::square(0.0, angle / (2.0 * omega));
}

// Schedule assembler that merges adjacent z rotations and drops the ones
// that are identity up to phase.
class ScheduleBuilder {
public:
    explicit ScheduleBuilder(const PairParams& params)
        : omega_(params.omega()), schedule_{params, {}} {}

    void add_z_angle(double angle) { pending_z_ += angle; }

    void add_pulse(const Pulse& pulse) {
        flush_z();
        schedule_.pulses.push_back(pulse);
    }

    Schedule take() {
        flush_z();
        return std::move(schedule_);
    }

private:
    void flush_z() {
        const double angle = mod_positive(pending_z_, 2.0 * kTwoPi);
        pending_z_ = 0.0;
        // angle = 0 or 2pi is the identity up to a global phase
        if (angle < 1e-12 || std::abs(angle - kTwoPi) < 1e-12 ||
            std::abs(angle - 2.0 * kTwoPi) < 1e-12)
            return;
        schedule_.pulses.push_back(z_pulse(omega_, angle));
    }

    double omega_;
    double pending_z_ = 0.0;
    Schedule schedule_;
};

// Appends the pair construction for a y rotation by `psi` to a builder.
// Returns the pair count used.
int emit_y_rotation(ScheduleBuilder& builder, const PairParams& params, double psi,
                    const CompileOptions& options) {
    const double omega = params.omega();
    const double j_max = options.effective_j_max(params);
    if (!(j_max > 0.0))
        throw UnsupportedConfiguration("y-rotation synthesis requires j_max > 0");

    const double psi_m = mod_positive(psi, kTwoPi);
    if (psi_m < 1e-12 || kTwoPi - psi_m < 1e-12) return 0;

    // Each [Rz(pi), tilted-pi] pair advances the y angle by +2*theta;
    // reversed pulse order advances it by -2*theta. Spend whichever sign
    // needs less total tilt.
    const bool forward = psi_m <= kPi;
    const double reach_needed = forward ? psi_m : kTwoPi - psi_m;

    const double theta_max = std::atan2(2.0 * j_max, omega);
    const int pairs = static_cast<int>(std::ceil(reach_needed / (2.0 * theta_max) - 1e-12));
    if (pairs > options.max_pairs)
        throw CapacityExceeded("y rotation by " + std::to_string(psi_m) +
                                   " needs " + std::to_string(pairs) +
                                   " pulse pairs (max_pairs = " +
                                   std::to_string(options.max_pairs) + ")",
                               pairs);

    const double theta = reach_needed / (2.0 * pairs);
    for (int p = 0; p < pairs; ++p) {
        if (forward) {
            builder.add_z_angle(kPi);
            builder.add_pulse(tilted_pi_pulse(omega, theta));
        } else {
            builder.add_pulse(tilted_pi_pulse(omega, theta));
            builder.add_z_angle(kPi);
        }
    }
    return pairs;
}

double schedule_leakage(const Schedule& schedule) {
    const ComplexMatrix u = propagate_schedule(schedule, Subspace::full4);
    double leak = 0.0;
    for (std::size_t col : {std::size_t{1}, std::size_t{2}})
        leak = std::max(leak, std::norm(u(0, col)) + std::norm(u(3, col)));
    return leak;
}

FidelityReport make_report(const Schedule& schedule, const ComplexMatrix& target,
                           double tolerance) {
    FidelityReport report;
    report.total_duration = schedule.total_duration();
    report.pulse_count = static_cast<int>(schedule.pulses.size());
    report.fidelity =
        fidelity_up_to_phase(propagate_schedule(schedule, Subspace::logical2), target);
    report.leakage = schedule_leakage(schedule);
    report.frame_residual = frame_residual(schedule.params.omega(), report.total_duration);
    report.converged = report.fidelity >= 1.0 - tolerance;
    return report;
}

}  // namespace

EulerAngles euler_decompose(const ComplexMatrix& u) {
    if (u.dim() != 2) throw std::invalid_argument("euler_decompose: expected 2x2");
    if (unitarity_error(u) > 1e-10)
        throw std::invalid_argument("euler_decompose: matrix is not unitary");

    const cdouble det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const cdouble root = std::polar(std::sqrt(std::abs(det)), std::arg(det) / 2.0);
    const cdouble u00 = u(0, 0) / root;
    const cdouble u10 = u(1, 0) / root;

    EulerAngles e;
    e.beta = 2.0 * std::atan2(std::abs(u10), std::abs(u00));

    if (std::abs(u10) < 1e-12) {
        // gimbal lock at beta = 0: whole z angle goes to alpha
        e.alpha = mod_positive(-2.0 * std::arg(u00), kTwoPi);
    } else if (std::abs(u00) < 1e-12) {
        // beta = pi
        e.alpha = mod_positive(2.0 * std::arg(u10), kTwoPi);
    } else {
        e.alpha = mod_positive(std::arg(u10) - std::arg(u00), kTwoPi);
        e.gamma = mod_positive(-std::arg(u10) - std::arg(u00), kTwoPi);
    }

    const ComplexMatrix rec =
        rotation_z(e.alpha) * rotation_y(e.beta) * rotation_z(e.gamma);
    cdouble tr{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) tr += std::conj(rec(k, i)) * u(k, i);
    e.global_phase = std::arg(tr);
    return e;
}

Schedule compile_rotation_z(const PairParams& params, double angle) {
    const double omega = require_positive_omega(params, "compile_rotation_z");
    const double psi = mod_positive(angle, 2.0 * kTwoPi);
    Schedule schedule{params, {}};
    if (psi > 1e-12 && 2.0 * kTwoPi - psi > 1e-12)
        schedule.pulses.push_back(z_pulse(omega, psi));
    return schedule;
}

Schedule compile_rotation_y(const PairParams& params, double angle,
                            const CompileOptions& options) {
    require_positive_omega(params, "compile_rotation_y");
    ScheduleBuilder builder(params);
    emit_y_rotation(builder, params, angle, options);
    return builder.take();
}

Schedule compile_rotation_tilted(const PairParams& params, double theta, double angle,
                                 const CompileOptions& options) {
    const double omega = require_positive_omega(params, "compile_rotation_tilted");
    if (!(theta >= 0.0) || theta >= kPi / 2.0)
        throw std::invalid_argument("tilt angle must lie in [0, pi/2)");
    const double j = 0.5 * omega * std::tan(theta);
    if (j > options.effective_j_max(params) * (1.0 + 1e-12))
        throw CapacityExceeded("tilt angle needs J beyond j_max");

    const double psi = mod_positive(angle, 2.0 * kTwoPi);
    Schedule schedule{params, {}};
    if (psi > 1e-12) {
        const double w_eff = std::hypot(omega, 2.0 * j);
        schedule.pulses.push_back(Pulse::square(j, psi / (2.0 * w_eff)));
    }
    return schedule;
}

Schedule compile_hadamard(const PairParams& params) {
    const double omega = require_positive_omega(params, "compile_hadamard");
    const double j = 0.5 * omega;
    if (j > params.j_max)
        throw CapacityExceeded("hadamard needs J = omega/2 > j_max");
    Schedule schedule{params, {}};
    schedule.pulses.push_back(
        Pulse::square(j, kPi / (2.0 * std::sqrt(2.0) * omega)));
    return schedule;
}

Schedule compile_x_pi_sandwich(const PairParams& params, const CompileOptions& options) {
    const double omega = require_positive_omega(params, "compile_x_pi_sandwich");
    const double theta = kPi / 4.0;
    if (0.5 * omega * std::tan(theta) > options.effective_j_max(params) * (1.0 + 1e-12))
        throw CapacityExceeded("x-pi sandwich needs J = omega/2 > j_max");
    Schedule schedule{params, {}};
    schedule.pulses.push_back(tilted_pi_pulse(omega, theta));
    schedule.pulses.push_back(z_pulse(omega, kPi));
    schedule.pulses.push_back(tilted_pi_pulse(omega, theta));
    return schedule;
}

Schedule compile_swap(const PairParams& params, double j) {
    if (std::abs(params.omega()) > 1e-12)
        throw UnsupportedConfiguration("single-pulse SWAP requires omega = 0");
    if (!(j > 0.0) || j > params.j_max)
        throw DomainViolation("SWAP coupling must lie in (0, j_max]");
    Schedule schedule{params, {}};
    schedule.pulses.push_back(Pulse::square(j, kPi / (4.0 * j)));
    return schedule;
}

double frame_residual(double omega, double total_duration) {
    return std::abs(std::remainder(omega * total_duration, kTwoPi));
}

Schedule frame_sync_pad(const Schedule& schedule, const PairParams& params,
                        double j_max) {
    const double omega = require_positive_omega(params, "frame_sync_pad");
    if (!(j_max > 0.0))
        throw UnsupportedConfiguration("frame_sync_pad requires j_max > 0");

    const double tau = schedule.total_duration();
    const double period = kTwoPi / omega;
    if (frame_residual(omega, tau) <= 1e-12 * std::max(1.0, omega * tau))
        return schedule;  // already synced

    const double w_eff_max = std::hypot(omega, 2.0 * j_max);
    Schedule padded = schedule;
    for (long n = static_cast<long>(std::ceil(tau / period)); ; ++n) {
        const double deficit = n * period - tau;
        if (deficit <= 0.0) continue;
        // m pulses of duration deficit/m, each a full 2pi rotation, need
        // omega <= m*pi/deficit <= omega'_max
        const long m = std::max(1L, static_cast<long>(std::ceil(deficit * omega / kPi - 1e-9)));
        if (static_cast<double>(m) > deficit * w_eff_max / kPi + 1e-9) continue;

        const double w_eff = std::clamp(m * kPi / deficit, omega, w_eff_max);
        const double k = std::sqrt(std::max(0.0, w_eff * w_eff - omega * omega));
        const double j = std::min(0.5 * k, j_max);
        for (long i = 0; i < m; ++i)
            padded.pulses.push_back(Pulse::square(j, deficit / m));
        return padded;
    }
}

CompileResult compile_gate(const GateSpec& spec, const PairParams& params) {
    const CompileOptions& options = spec.options;
    CompileResult result;

    if (std::holds_alternative<NnorGate>(spec.kind)) {
        const auto& gate = std::get<NnorGate>(spec.kind);
        SearchConfig config;
        config.n_pulses = gate.n_pulses;
        config.seeds = gate.seeds;
        config.rng_seed = gate.rng_seed;
        config.tolerance = gate.tolerance;
        config.j_max = options.effective_j_max(params);
        const SearchResult found = search_nnor(params, config);
        result.schedule = found.schedule;
        result.target = nnor_target(params, found.schedule.total_duration()).target_unitary;
        result.report.fidelity = 1.0 - found.infidelity;
        result.report.total_duration = found.schedule.total_duration();
        result.report.pulse_count = static_cast<int>(found.schedule.pulses.size());
        result.report.frame_residual =
            frame_residual(params.omega(), result.report.total_duration);
        result.report.converged = found.converged;
        return result;
    }

    if (std::holds_alternative<SwapGate>(spec.kind)) {
        result.schedule = compile_swap(params, std::get<SwapGate>(spec.kind).j);
        result.target = pauli_x();
        // omega = 0 here, so the frame residual is trivially zero
        result.report = make_report(result.schedule, result.target, options.tolerance);
        return result;
    }

    if (std::holds_alternative<RotationZ>(spec.kind)) {
        const double psi = std::get<RotationZ>(spec.kind).angle;
        result.schedule = compile_rotation_z(params, psi);
        result.target = rotation_z(psi);
    } else if (std::holds_alternative<RotationY>(spec.kind)) {
        const double psi = std::get<RotationY>(spec.kind).angle;
        result.schedule = compile_rotation_y(params, psi, options);
        result.target = rotation_y(psi);
    } else if (std::holds_alternative<RotationTilted>(spec.kind)) {
        const auto& rot = std::get<RotationTilted>(spec.kind);
        result.schedule = compile_rotation_tilted(params, rot.theta, rot.angle, options);
        result.target = rotation_operator(
            {{std::sin(rot.theta), 0.0, std::cos(rot.theta)}, rot.angle});
    } else if (std::holds_alternative<HadamardGate>(spec.kind)) {
        result.schedule = compile_hadamard(params);
        result.target = ComplexMatrix(2);
        const double s = 1.0 / std::sqrt(2.0);
        result.target(0, 0) = s;
        result.target(0, 1) = s;
        result.target(1, 0) = s;
        result.target(1, 1) = -s;
    } else {
        const auto& arb = std::get<ArbitraryGate>(spec.kind);
        if (arb.unitary.dim() != 2 || unitarity_error(arb.unitary) > 1e-10)
            throw std::invalid_argument("arbitrary gate must be a 2x2 unitary");
        const EulerAngles e = euler_decompose(arb.unitary);
        ScheduleBuilder builder(params);
        builder.add_z_angle(e.gamma);
        emit_y_rotation(builder, params, e.beta, options);
        builder.add_z_angle(e.alpha);
        result.schedule = builder.take();
        result.target = arb.unitary;
    }

    if (options.frame_sync)
        result.schedule = frame_sync_pad(result.schedule, params,
                                         options.effective_j_max(params));
    result.report = make_report(result.schedule, result.target, options.tolerance);
    return result;
}

}  // namespace abchain
