#pragma once

#include "v2vlos/probability.hpp"
#include "v2vlos/scenario_model.hpp"
#include "v2vlos/trace.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace v2vlos {

inline constexpr double kBinWidth = 10.0;
inline constexpr std::size_t kBinCount = 50;

/// Half-open distance interval [10 i, 10 (i + 1)).
struct DistanceBin {
    std::size_t index = 0;

    double lower() const noexcept { return kBinWidth * static_cast<double>(index); }
    double upper() const noexcept { return kBinWidth * static_cast<double>(index + 1); }
    double center() const noexcept { return lower() + kBinWidth / 2; }

    friend bool operator==(const DistanceBin&, const DistanceBin&) = default;
};

/// RangeError outside [0, 500).
DistanceBin bin_of(double d);

using CountRow = std::array<std::uint64_t, kStateCount>;

struct BinCounts {
    CountRow states{};
    std::array<CountRow, kStateCount> transitions{};

    friend bool operator==(const BinCounts&, const BinCounts&) = default;
};

/// Occurrence and transition counts per distance bin. Each step counts toward
/// its own bin; a transition counts toward the bin of its origin step.
struct EmpiricalStats {
    std::array<BinCounts, kBinCount> bins{};
    std::uint64_t total_steps = 0;
    std::uint64_t total_transitions = 0;

    EmpiricalStats& merge(const EmpiricalStats& other) noexcept;

    friend bool operator==(const EmpiricalStats&, const EmpiricalStats&) = default;
};

EmpiricalStats merge(EmpiricalStats a, const EmpiricalStats& b) noexcept;

/// Adds one trace. A step at exactly 500 m counts toward the last bin.
/// Throws DomainError on non-unit time spacing and RangeError for distances
/// with no bin; `stats` is untouched on error.
EmpiricalStats accumulate(EmpiricalStats stats, const StateTrace& trace);

/// One estimated row or distribution; nullopt when the origin was never seen.
using MaybeDistribution = std::optional<Distribution>;

struct BinTransitionEstimate {
    DistanceBin bin;
    std::array<MaybeDistribution, kStateCount> rows;
};

struct BinStateEstimate {
    DistanceBin bin;
    MaybeDistribution p;
};

std::vector<BinTransitionEstimate> empirical_transition_probs(const EmpiricalStats& stats);
std::vector<BinStateEstimate> empirical_state_probs(const EmpiricalStats& stats);

/// Sample Pearson correlation. DomainError on length mismatch,
/// DegenerateError with fewer than two points or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// As above with pairwise deletion of missing entries.
double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys);

/// How empirical data is compared against a reference model.
enum class CorrelationMode {
    PerBinEstimates, ///< raw per-bin frequencies vs model at bin centers
    FittedCurves,    ///< quadratic smooth of per-bin frequencies vs model
};

/// Correlation of every state probability and transition entry; nullopt where
/// the entry is undefined (too few bins or no variance).
struct CorrelationReport {
    CorrelationMode mode = CorrelationMode::PerBinEstimates;
    std::array<std::optional<double>, kStateCount> state{};
    std::array<std::array<std::optional<double>, kStateCount>, kStateCount> transition{};
    std::size_t bins_used = 0;
};

CorrelationReport correlate(const EmpiricalStats& stats, const ScenarioModel& reference, CorrelationMode mode);

/// Key/value table laid out as LOS, NLOSb, NLOSv columns with one transition
/// row per origin state.
std::string format_correlation_report(const CorrelationReport& report, const std::string& title);

/// Per-bin CSV: bin,center,n_LOS,n_NLOSv,n_NLOSb,p_LOS,...,T_LOS_LOS,...
std::string format_stats_csv(const EmpiricalStats& stats);

} // namespace v2vlos
