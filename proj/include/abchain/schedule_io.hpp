#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "abchain/propagator.hpp"

namespace abchain {

// On-disk schedule description (JSON, version 1). Numbers are written
// with 17 significant digits so a write/read round trip reproduces every
// double exactly.
struct ScheduleFile {
    int version = 1;
    double omega = 0.0;
    std::optional<double> omega_large;
    double j_max = 0.0;
    std::string target = "identity";
    bool frame_synced = false;
    std::vector<Pulse> pulses;

    static ScheduleFile from_schedule(const Schedule& schedule, const std::string& target,
                                      bool frame_synced);
    Schedule to_schedule() const;

    void validate() const;
};

std::string write_schedule_text(const ScheduleFile& file);
void write_schedule_file(const ScheduleFile& file, const std::string& path);

// Throws std::runtime_error with a field-level diagnostic on malformed
// input.
ScheduleFile read_schedule_text(const std::string& text);
ScheduleFile read_schedule_file(const std::string& path);

}  // namespace abchain
