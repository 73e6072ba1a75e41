#include "abchain/schedule_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace abchain {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("schedule file: " + what);
}

double get_finite(const nlohmann::json& j, const char* field,
                  const std::string& context = {}) {
    const std::string name = context.empty() ? std::string("'") + field + "'"
                                             : context + "." + field;
    if (!j.contains(field)) fail("missing field " + name);
    if (!j[field].is_number()) fail("field " + name + " must be a number");
    const double v = j[field].get<double>();
    if (!std::isfinite(v)) fail("field " + name + " must be finite");
    return v;
}

}  // namespace

ScheduleFile ScheduleFile::from_schedule(const Schedule& schedule,
                                         const std::string& target, bool frame_synced) {
    ScheduleFile f;
    f.omega = schedule.params.omega();
    f.omega_large = schedule.params.omega_large();
    f.j_max = schedule.params.j_max;
    f.target = target;
    f.frame_synced = frame_synced;
    f.pulses = schedule.pulses;
    return f;
}

Schedule ScheduleFile::to_schedule() const {
    validate();
    const double shift = omega_large.value_or(0.0);
    Schedule s;
    s.params = PairParams::from_omega(omega, j_max, shift);
    s.pulses = pulses;
    return s;
}

void ScheduleFile::validate() const {
    if (version != 1) fail("unsupported version " + std::to_string(version));
    if (!std::isfinite(omega) || !std::isfinite(j_max)) fail("omega and j_max must be finite");
    if (pulses.empty() && target != "identity") fail("pulse list is empty");
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const Pulse& p = pulses[i];
        const std::string where = "pulses[" + std::to_string(i) + "]";
        if (!(p.j >= 0.0)) fail(where + ".j must be >= 0");
        if (!(p.duration > 0.0)) fail(where + ".t must be > 0");
        if (p.shape == Pulse::Shape::gaussian && !(p.fwhm > 0.0))
            fail(where + ".fwhm must be > 0 for gaussian pulses");
    }
}

std::string write_schedule_text(const ScheduleFile& file) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << file.version << ",\n";
    out << "  \"omega\": " << fmt17(file.omega) << ",\n";
    if (file.omega_large)
        out << "  \"omega_large\": " << fmt17(*file.omega_large) << ",\n";
    out << "  \"j_max\": " << fmt17(file.j_max) << ",\n";
    out << "  \"target\": " << nlohmann::json(file.target).dump() << ",\n";
    out << "  \"frame_synced\": " << (file.frame_synced ? "true" : "false") << ",\n";
    out << "  \"pulses\": [";
    for (std::size_t i = 0; i < file.pulses.size(); ++i) {
        const Pulse& p = file.pulses[i];
        out << (i == 0 ? "" : ",") << "\n    {\"j\": " << fmt17(p.j)
            << ", \"t\": " << fmt17(p.duration) << ", \"shape\": \""
            << (p.shape == Pulse::Shape::square ? "square" : "gaussian") << "\"";
        if (p.shape == Pulse::Shape::gaussian) out << ", \"fwhm\": " << fmt17(p.fwhm);
        out << "}";
    }
    out << (file.pulses.empty() ? "]" : "\n  ]") << "\n}\n";
    return out.str();
}

void write_schedule_file(const ScheduleFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << write_schedule_text(file);
}

ScheduleFile read_schedule_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");

    ScheduleFile f;
    if (!j.contains("version") || !j["version"].is_number_integer())
        fail("missing integer field 'version'");
    f.version = j["version"].get<int>();
    f.omega = get_finite(j, "omega");
    if (j.contains("omega_large")) f.omega_large = get_finite(j, "omega_large");
    f.j_max = get_finite(j, "j_max");
    if (j.contains("target")) {
        if (!j["target"].is_string()) fail("field 'target' must be a string");
        f.target = j["target"].get<std::string>();
    }
    if (j.contains("frame_synced")) {
        if (!j["frame_synced"].is_boolean()) fail("field 'frame_synced' must be a boolean");
        f.frame_synced = j["frame_synced"].get<bool>();
    }
    if (!j.contains("pulses") || !j["pulses"].is_array()) fail("missing array field 'pulses'");
    for (std::size_t i = 0; i < j["pulses"].size(); ++i) {
        const auto& jp = j["pulses"][i];
        const std::string where = "pulses[" + std::to_string(i) + "]";
        if (!jp.is_object()) fail(where + " must be an object");
        Pulse p;
        p.j = get_finite(jp, "j", where);
        p.duration = get_finite(jp, "t", where);
        std::string shape = "square";
        if (jp.contains("shape")) {
            if (!jp["shape"].is_string()) fail(where + ".shape must be a string");
            shape = jp["shape"].get<std::string>();
        }
        if (shape == "square") {
            p.shape = Pulse::Shape::square;
        } else if (shape == "gaussian") {
            p.shape = Pulse::Shape::gaussian;
            p.fwhm = get_finite(jp, "fwhm", where);
        } else {
            fail(where + ".shape must be 'square' or 'gaussian'");
        }
        f.pulses.push_back(p);
    }
    f.validate();
    return f;
}

ScheduleFile read_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_schedule_text(buf.str());
}

}  // namespace abchain
