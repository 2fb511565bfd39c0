#pragma once

#include "v2vlos/trace.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace v2vlos {

/// Delimited trace text. A mandatory header selects the layout:
///   t,d             distance trace
///   t,d,state       one labeled trace
///   link,t,d,state  several labeled traces, grouped by link id
/// Lines starting with '#' are comments; "# scenario=" and "# seed=" comments
/// are read back into StateTrace provenance. Numbers use the shortest
/// round-trip representation, so write -> read -> write is byte-stable.

DistanceTrace parse_distance_trace(std::string_view text);
std::vector<StateTrace> parse_labeled_traces(std::string_view text);

DistanceTrace read_distance_trace(const std::filesystem::path& path);
std::vector<StateTrace> read_labeled_traces(const std::filesystem::path& path);

std::string format_distance_trace(const DistanceTrace& trace);
std::string format_state_trace(const StateTrace& trace);
/// Multi-link file; link ids are 0..n-1.
std::string format_labeled_traces(std::span<const StateTrace> traces);

void write_state_trace(const StateTrace& trace, const std::filesystem::path& path);
void write_labeled_traces(std::span<const StateTrace> traces, const std::filesystem::path& path);
void write_distance_trace(const DistanceTrace& trace, const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

} // namespace v2vlos
