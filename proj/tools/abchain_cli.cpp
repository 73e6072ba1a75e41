// Command-line surface: compile logical gates to pulse-schedule files,
// simulate schedules on a pair or a chain, run the two-qubit gate
// search, and export Bloch trajectories as CSV.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "abchain/chain_sim.hpp"
#include "abchain/compiler.hpp"
#include "abchain/errors.hpp"
#include "abchain/linalg.hpp"
#include "abchain/nnor_search.hpp"
#include "abchain/schedule_io.hpp"

namespace {

using namespace abchain;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void print_report(const FidelityReport& r) {
    std::cout << "fidelity=" << fmt(r.fidelity) << "\n"
              << "infidelity=" << fmt(1.0 - r.fidelity) << "\n"
              << "total_duration=" << fmt(r.total_duration) << "\n"
              << "pulse_count=" << r.pulse_count << "\n"
              << "leakage=" << fmt(r.leakage) << "\n"
              << "frame_residual=" << fmt(r.frame_residual) << "\n"
              << "converged=" << (r.converged ? 1 : 0) << "\n";
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
    ComplexMatrix u(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            double re, im;
            if (!(in >> re >> im))
                throw std::runtime_error("matrix file '" + path +
                                         "' needs 8 numbers (re im, row-major)");
            u(i, j) = cdouble{re, im};
        }
    return u;
}

struct ParsedGate {
    GateSpec spec;
    std::string label;
};

// Gate grammar: h | rz:<angle> | ry:<angle> | tilt:<theta>:<angle> |
// u:<matrix-file> | swap | nnor | identity
ParsedGate parse_gate(const std::string& text, double swap_j, const NnorGate& nnor) {
    ParsedGate g;
    g.label = text;
    if (text == "h") {
        g.spec.kind = HadamardGate{};
    } else if (text == "swap") {
        g.spec.kind = SwapGate{swap_j};
    } else if (text == "nnor") {
        g.spec.kind = nnor;
    } else if (text.rfind("rz:", 0) == 0) {
        g.spec.kind = RotationZ{std::stod(text.substr(3))};
    } else if (text.rfind("ry:", 0) == 0) {
        g.spec.kind = RotationY{std::stod(text.substr(3))};
    } else if (text.rfind("tilt:", 0) == 0) {
        const std::string rest = text.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("gate", "tilt gate needs tilt:<theta>:<angle>");
        g.spec.kind = RotationTilted{std::stod(rest.substr(0, colon)),
                                     std::stod(rest.substr(colon + 1))};
    } else if (text.rfind("u:", 0) == 0) {
        g.spec.kind = ArbitraryGate{read_matrix_file(text.substr(2))};
    } else {
        throw CLI::ValidationError("gate", "unknown gate '" + text + "'");
    }
    return g;
}

ComplexMatrix target_matrix(const std::string& label, double swap_j) {
    if (label == "identity") return ComplexMatrix::identity(2);
    ParsedGate g = parse_gate(label, swap_j > 0 ? swap_j : 1.0, NnorGate{});
    if (std::holds_alternative<HadamardGate>(g.spec.kind)) {
        ComplexMatrix h(2);
        const double s = 1.0 / std::sqrt(2.0);
        h(0, 0) = s; h(0, 1) = s; h(1, 0) = s; h(1, 1) = -s;
        return h;
    }
    if (std::holds_alternative<RotationZ>(g.spec.kind))
        return rotation_z(std::get<RotationZ>(g.spec.kind).angle);
    if (std::holds_alternative<RotationY>(g.spec.kind))
        return rotation_y(std::get<RotationY>(g.spec.kind).angle);
    if (std::holds_alternative<RotationTilted>(g.spec.kind)) {
        const auto& r = std::get<RotationTilted>(g.spec.kind);
        return rotation_operator({{std::sin(r.theta), 0.0, std::cos(r.theta)}, r.angle});
    }
    if (std::holds_alternative<ArbitraryGate>(g.spec.kind))
        return std::get<ArbitraryGate>(g.spec.kind).unitary;
    if (std::holds_alternative<SwapGate>(g.spec.kind)) return pauli_x();
    throw std::runtime_error("gate '" + label + "' has no 2x2 target");
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples, double omega) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "time,bx,by,bz,p00,p11\n";
    const double unit = omega != 0.0 ? omega : 1.0;  // time in 1/omega units
    for (const auto& s : samples)
        out << fmt(s.time * unit) << "," << fmt(s.bx) << "," << fmt(s.by) << ","
            << fmt(s.bz) << "," << fmt(s.p00) << "," << fmt(s.p11) << "\n";
}

// Piecewise propagation of a chain state up to each sample time.
std::vector<TrajectorySample> chain_trajectory(const ChainSchedule& schedule,
                                               ChainState state, int pair_index,
                                               int samples) {
    const double t_total = schedule.total_duration();
    std::vector<TrajectorySample> out;
    out.reserve(samples);

    std::size_t seg_idx = 0;
    double seg_start = 0.0, evolved = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t_total * i / (samples - 1);
        while (seg_idx < schedule.segments.size()) {
            const auto& seg = schedule.segments[seg_idx];
            const double advance_to =
                std::min(t - seg_start, seg.duration);
            if (advance_to > evolved) {
                ChainSchedule slice{schedule.chain,
                                    {ChainSegment{seg.bond_j, advance_to - evolved}}};
                state = propagate_chain(slice, std::move(state));
                evolved = advance_to;
            }
            if (t < seg_start + seg.duration - 1e-15 * std::max(1.0, t_total)) break;
            seg_start += seg.duration;
            evolved = 0.0;
            ++seg_idx;
        }
        const ComplexMatrix rho = pair_reduced_density(state, pair_index);
        TrajectorySample s;
        s.time = t;
        s.bx = 2.0 * rho(2, 1).real();
        s.by = 2.0 * rho(2, 1).imag();
        s.bz = rho(1, 1).real() - rho(2, 2).real();
        s.p00 = rho(0, 0).real();
        s.p11 = rho(3, 3).real();
        out.push_back(s);
    }
    return out;
}

int cmd_compile(const std::string& gate_text, double omega, double omega_large,
                std::optional<double> j_max_opt, double tolerance, bool frame_sync,
                double swap_j, const NnorGate& nnor_cfg, const std::string& out_path) {
    const double j_max = j_max_opt.value_or(0.5 * std::sqrt(3.0) * std::abs(omega));
    PairParams params = PairParams::from_omega(omega, j_max, omega_large);

    ParsedGate gate = parse_gate(gate_text, swap_j, nnor_cfg);
    gate.spec.options.tolerance =
        std::holds_alternative<NnorGate>(gate.spec.kind) ? nnor_cfg.tolerance : tolerance;
    gate.spec.options.frame_sync = frame_sync;

    const CompileResult result = compile_gate(gate.spec, params);

    std::cout << "gate=" << gate.label << "\n"
              << "omega=" << fmt(omega) << "\n"
              << "j_max=" << fmt(j_max) << "\n";
    print_report(result.report);
    if (!out_path.empty()) {
        write_schedule_file(
            ScheduleFile::from_schedule(result.schedule, gate.label, frame_sync), out_path);
        std::cout << "schedule_written=" << out_path << "\n";
    }
    return result.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_simulate(const std::string& schedule_path, const std::string& target_label,
                 double tolerance, int chain_spins, int bond, int steps,
                 const std::string& trajectory_path, int samples) {
    const ScheduleFile file = read_schedule_file(schedule_path);
    const Schedule schedule = file.to_schedule();
    PropagateOptions opts;
    if (steps > 0) opts.waveform_steps = steps;

    const std::string label = !target_label.empty() ? target_label : file.target;

    FidelityReport report;
    report.total_duration = schedule.total_duration();
    report.pulse_count = static_cast<int>(schedule.pulses.size());
    report.frame_residual = frame_residual(schedule.params.omega(), report.total_duration);

    if (chain_spins > 0) {
        if (bond < 0 || bond + 1 >= chain_spins)
            throw CLI::ValidationError("--bond", "bond index out of range");
        if (bond % 2 != 0)
            throw CLI::ValidationError("--bond",
                                       "logical extraction needs a pair-internal "
                                       "(even) bond index");
        for (const auto& p : schedule.pulses)
            if (p.shape != Pulse::Shape::square)
                throw CLI::ValidationError("--chain", "chain simulation takes square pulses");

        const ChainParams chain =
            ChainParams::alternating(chain_spins, schedule.params.a, schedule.params.b);
        std::vector<std::pair<double, double>> jt;
        for (const auto& p : schedule.pulses) jt.emplace_back(p.j, p.duration);
        const ChainSchedule chain_schedule = embed_on_bond(chain, bond, jt);

        const int pair_index = bond / 2;
        const ComplexMatrix u_chain = propagate_chain_unitary(chain_schedule);
        const LogicalBlock block = logical_extract(u_chain, pair_index);
        report.leakage = block.leakage;
        report.fidelity = fidelity_up_to_phase(
            block.block, target_matrix(label, schedule.pulses.empty()
                                                  ? 1.0
                                                  : schedule.pulses.front().j));
        report.converged = report.fidelity >= 1.0 - tolerance;

        if (!trajectory_path.empty()) {
            ChainState initial = ChainState::all_logical_zero(chain_spins);
            write_trajectory_csv(
                trajectory_path,
                chain_trajectory(chain_schedule, std::move(initial), pair_index, samples),
                schedule.params.omega());
            std::cout << "trajectory_written=" << trajectory_path << "\n";
        }
    } else {
        const ComplexMatrix u = propagate_schedule(schedule, Subspace::logical2, opts);
        const ComplexMatrix u4 = propagate_schedule(schedule, Subspace::full4, opts);
        double leak = 0.0;
        for (std::size_t col : {std::size_t{1}, std::size_t{2}})
            leak = std::max(leak, std::norm(u4(0, col)) + std::norm(u4(3, col)));
        report.leakage = leak;
        report.fidelity = fidelity_up_to_phase(
            u, target_matrix(label, schedule.pulses.empty() ? 1.0
                                                            : schedule.pulses.front().j));
        report.converged = report.fidelity >= 1.0 - tolerance;

        if (!trajectory_path.empty()) {
            const cvector zero_logical{1.0, 0.0};
            write_trajectory_csv(trajectory_path,
                                 bloch_trajectory(schedule, zero_logical, samples, opts),
                                 schedule.params.omega());
            std::cout << "trajectory_written=" << trajectory_path << "\n";
        }
    }

    std::cout << "schedule=" << schedule_path << "\n"
              << "target=" << label << "\n";
    print_report(report);
    return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_search_nnor(double omega, double omega_large, std::optional<double> j_max_opt,
                    int pulses, int seeds, std::uint64_t rng_seed, double tolerance,
                    double t_max, const std::string& out_path) {
    const double j_max = j_max_opt.value_or(0.5 * std::sqrt(3.0) * std::abs(omega));
    PairParams params = PairParams::from_omega(omega, j_max, omega_large);

    SearchConfig config;
    config.n_pulses = pulses;
    config.seeds = seeds;
    config.rng_seed = rng_seed;
    config.tolerance = tolerance;
    config.t_max = t_max;
    const SearchResult result = search_nnor(params, config);

    std::cout << "gate=nnor\n"
              << "omega=" << fmt(omega) << "\n"
              << "j_max=" << fmt(j_max) << "\n"
              << "pulses=" << pulses << "\n"
              << "seeds=" << seeds << "\n"
              << "rng_seed=" << rng_seed << "\n"
              << "infidelity=" << fmt(result.infidelity) << "\n"
              << "fidelity=" << fmt(1.0 - result.infidelity) << "\n"
              << "total_duration=" << fmt(result.schedule.total_duration()) << "\n"
              << "sync_residual=" << fmt(result.sync_residual) << "\n"
              << "best_seed=" << result.best_seed << "\n"
              << "converged=" << (result.converged ? 1 : 0) << "\n";
    for (std::size_t i = 0; i < result.schedule.pulses.size(); ++i) {
        const Pulse& p = result.schedule.pulses[i];
        std::cout << "pulse" << i << "_j=" << fmt(p.j) << "\n"
                  << "pulse" << i << "_t=" << fmt(p.duration) << "\n";
    }
    if (!out_path.empty()) {
        write_schedule_file(ScheduleFile::from_schedule(result.schedule, "nnor", false),
                            out_path);
        std::cout << "schedule_written=" << out_path << "\n";
    }
    return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_trajectory(const std::string& schedule_path, const std::string& out_path,
                   int samples, int steps) {
    const ScheduleFile file = read_schedule_file(schedule_path);
    const Schedule schedule = file.to_schedule();
    PropagateOptions opts;
    if (steps > 0) opts.waveform_steps = steps;
    const cvector zero_logical{1.0, 0.0};
    write_trajectory_csv(out_path, bloch_trajectory(schedule, zero_logical, samples, opts),
                         schedule.params.omega());
    std::cout << "trajectory_written=" << out_path << "\n"
              << "samples=" << samples << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exchange-pulse gate compiler and simulator for AB spin-pair chains"};
    app.require_subcommand(1);

    double omega = 1.0, omega_large = 0.0, tolerance = 1e-9;
    std::optional<double> j_max;
    std::string out_path, gate_text, schedule_path, target_label, trajectory_path;
    bool frame_sync = false;
    double swap_j = 1.0;
    int chain_spins = 0, bond = 0, steps = 0, samples = 256;
    NnorGate nnor_cfg;
    int pulses = 2, seeds = 64;
    std::uint64_t rng_seed = 0;
    double nnor_tolerance = 1e-6, t_max = 0.0;

    auto add_pair_flags = [&](CLI::App* cmd) {
        cmd->add_option("--omega", omega, "half-difference of the pair energies")
            ->capture_default_str();
        cmd->add_option("--omega-large", omega_large,
                        "half-sum of the pair energies (outer-level phases only)")
            ->capture_default_str();
        cmd->add_option("--j-max", j_max,
                        "coupling bound; default sqrt(3)/2 * omega");
    };

    CLI::App* compile = app.add_subcommand("compile", "lower a gate to a pulse schedule");
    compile->add_option("gate", gate_text,
                        "h | rz:<angle> | ry:<angle> | tilt:<theta>:<angle> | "
                        "u:<matrix-file> | swap | nnor")
        ->required();
    add_pair_flags(compile);
    compile->add_option("--tolerance", tolerance, "fidelity tolerance")->capture_default_str();
    compile->add_option("--out", out_path, "write the schedule file here");
    compile->add_flag("--frame-sync,!--no-frame-sync", frame_sync,
                      "pad with 2pi rotations until omega*tau is a multiple of 2pi");
    compile->add_option("--j", swap_j, "coupling for the swap gate")->capture_default_str();
    compile->add_option("--pulses", nnor_cfg.n_pulses, "pulse count for the nnor search")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    compile->add_option("--seeds", nnor_cfg.seeds, "seed count for the nnor search")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    compile->add_option("--rng-seed", nnor_cfg.rng_seed, "rng seed for the nnor search")
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "propagate a schedule file");
    simulate->add_option("schedule", schedule_path, "schedule JSON file")->required();
    simulate->add_option("--target", target_label,
                         "gate to compare against (defaults to the file's label)");
    simulate->add_option("--tolerance", tolerance, "fidelity tolerance")->capture_default_str();
    simulate->add_option("--chain", chain_spins, "embed on a chain with this many spins");
    simulate->add_option("--bond", bond, "active bond index for --chain")
        ->capture_default_str();
    simulate->add_option("--steps", steps, "integration steps per gaussian pulse");
    simulate->add_option("--trajectory", trajectory_path, "write Bloch trajectory CSV here");
    simulate->add_option("--samples", samples, "trajectory sample count")
        ->capture_default_str()
        ->check(CLI::Range(2, 1 << 20));

    CLI::App* search = app.add_subcommand("search-nnor", "find two-qubit gate pulses");
    add_pair_flags(search);
    search->add_option("--pulses", pulses, "pulses in the candidate schedule")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    search->add_option("--seeds", seeds, "random starting points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    search->add_option("--rng-seed", rng_seed, "seed for the start-point generator")
        ->capture_default_str();
    search->add_option("--tolerance", nnor_tolerance, "target infidelity")
        ->capture_default_str();
    search->add_option("--t-max", t_max, "per-pulse duration bound; default 4pi/omega");
    search->add_option("--out", out_path, "write the best schedule here");

    CLI::App* trajectory = app.add_subcommand("trajectory", "export a Bloch trajectory");
    trajectory->add_option("schedule", schedule_path, "schedule JSON file")->required();
    trajectory->add_option("--out", out_path, "CSV output path")->required();
    trajectory->add_option("--samples", samples, "sample count")
        ->capture_default_str()
        ->check(CLI::Range(2, 1 << 20));
    trajectory->add_option("--steps", steps, "integration steps per gaussian pulse");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compile->parsed())
            return cmd_compile(gate_text, omega, omega_large, j_max, tolerance, frame_sync,
                               swap_j, nnor_cfg, out_path);
        if (simulate->parsed())
            return cmd_simulate(schedule_path, target_label, tolerance, chain_spins, bond,
                                steps, trajectory_path, samples);
        if (search->parsed())
            return cmd_search_nnor(omega, omega_large, j_max, pulses, seeds, rng_seed,
                                   nnor_tolerance, t_max, out_path);
        if (trajectory->parsed())
            return cmd_trajectory(schedule_path, out_path, samples, steps);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
