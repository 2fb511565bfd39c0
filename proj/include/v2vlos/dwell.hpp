#pragma once

#include "v2vlos/los_state.hpp"
#include "v2vlos/trace.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>

namespace v2vlos {

struct DwellStats {
    std::size_t steps = 0;
    std::size_t changes = 0;
    /// steps / (changes + 1), in seconds.
    double mean_dwell = 0.0;
    /// Per state: run length in seconds -> number of runs.
    std::array<std::map<std::size_t, std::size_t>, kStateCount> histograms{};
};

/// A change is a step whose state differs from the previous step.
DwellStats dwell_statistics(const StateTrace& trace);

struct DwellSummary {
    std::size_t traces = 0;
    std::size_t total_steps = 0;
    std::size_t total_changes = 0;
    /// total_steps / (total_changes + traces)
    double mean_dwell = 0.0;
    double mean_changes_per_trace = 0.0;
    std::array<std::size_t, kStateCount> occupancy{};
};

DwellSummary summarize_dwell(std::span<const StateTrace> traces);

std::string format_dwell_report(const DwellSummary& summary, const std::string& label);

} // namespace v2vlos
