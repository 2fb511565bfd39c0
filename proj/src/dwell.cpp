#include "v2vlos/dwell.hpp"

#include <sstream>

namespace v2vlos {

DwellStats dwell_statistics(const StateTrace& trace)
{
    DwellStats out;
    out.steps = trace.size();
    if (trace.steps.empty())
        return out;

    std::size_t run = 1;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace.steps[i].state != trace.steps[i - 1].state) {
            ++out.changes;
            ++out.histograms[index_of(trace.steps[i - 1].state)][run];
            run = 1;
        } else {
            ++run;
        }
    }
    ++out.histograms[index_of(trace.steps.back().state)][run];
    out.mean_dwell = static_cast<double>(out.steps) / static_cast<double>(out.changes + 1);
    return out;
}

DwellSummary summarize_dwell(std::span<const StateTrace> traces)
{
    DwellSummary s;
    for (const auto& trace : traces) {
        if (trace.steps.empty())
            continue;
        const DwellStats d = dwell_statistics(trace);
        ++s.traces;
        s.total_steps += d.steps;
        s.total_changes += d.changes;
        for (const auto& step : trace.steps)
            ++s.occupancy[index_of(step.state)];
    }
    if (s.traces > 0) {
        s.mean_dwell = static_cast<double>(s.total_steps) / static_cast<double>(s.total_changes + s.traces);
        s.mean_changes_per_trace = static_cast<double>(s.total_changes) / static_cast<double>(s.traces);
    }
    return s;
}

std::string format_dwell_report(const DwellSummary& summary, const std::string& label)
{
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << label << ".traces = " << summary.traces << '\n';
    out << label << ".steps = " << summary.total_steps << '\n';
    out << label << ".changes = " << summary.total_changes << '\n';
    out << label << ".changes_per_trace = " << summary.mean_changes_per_trace << '\n';
    out << label << ".mean_dwell_s = " << summary.mean_dwell << '\n';
    for (LosState s : kAllStates) {
        const double share = summary.total_steps
                                 ? static_cast<double>(summary.occupancy[index_of(s)]) /
                                       static_cast<double>(summary.total_steps)
                                 : 0.0;
        out << label << ".occupancy." << to_string(s) << " = " << share << '\n';
    }
    return out.str();
}

} // namespace v2vlos
