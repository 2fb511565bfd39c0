#pragma once

#include "v2vlos/curve.hpp"
#include "v2vlos/los_state.hpp"

#include <array>

namespace v2vlos {

/// A curve attached to one target state.
struct ExplicitCurve {
    LosState state;
    CurveSpec curve;

    friend bool operator==(const ExplicitCurve&, const ExplicitCurve&) = default;
};

/// Probability over the three states given by two explicit curves; the third
/// state receives the complement.
class StateProbModel {
public:
    StateProbModel(ExplicitCurve first, ExplicitCurve second);

    const std::array<ExplicitCurve, 2>& explicit_curves() const noexcept { return curves_; }
    LosState complement_state() const noexcept { return complement_; }

    friend bool operator==(const StateProbModel&, const StateProbModel&) = default;

private:
    std::array<ExplicitCurve, 2> curves_;
    LosState complement_;
};

/// Outgoing transition probabilities of one origin state.
class TransitionRowModel {
public:
    TransitionRowModel(LosState origin, ExplicitCurve first, ExplicitCurve second);

    LosState origin() const noexcept { return origin_; }
    const StateProbModel& targets() const noexcept { return targets_; }
    const std::array<ExplicitCurve, 2>& explicit_curves() const noexcept { return targets_.explicit_curves(); }
    LosState complement_target() const noexcept { return targets_.complement_state(); }

    friend bool operator==(const TransitionRowModel&, const TransitionRowModel&) = default;

private:
    LosState origin_;
    StateProbModel targets_;
};

struct DistanceRange {
    double d_min = 1.0;
    double d_max = 500.0;

    friend bool operator==(const DistanceRange&, const DistanceRange&) = default;
};

/// What to do with a distance above DistanceRange::d_max.
enum class AboveRangePolicy { Error, Clamp };

/// How a probability triple whose explicit entries sum past one is repaired:
/// the smallest entry is zeroed, one explicit entry is kept and the remaining
/// entry becomes one minus the kept value.
enum class RepairPolicy {
    KeepLargest, ///< keep the larger explicit value
    KeepFirst,   ///< keep the first-listed explicit curve
};

/// Complete parameter set for one environment x density.
struct ScenarioModel {
    Environment environment = Environment::Urban;
    Density density = Density::Medium;
    StateProbModel state_probs;
    /// Indexed by origin state.
    std::array<TransitionRowModel, kStateCount> rows;
    DistanceRange valid_range{};
    AboveRangePolicy above_range = AboveRangePolicy::Error;
    RepairPolicy repair = RepairPolicy::KeepLargest;

    /// Throws DomainError when rows are not one per origin in state order, or
    /// the range is malformed.
    void validate() const;

    const TransitionRowModel& row(LosState origin) const noexcept { return rows[index_of(origin)]; }

    friend bool operator==(const ScenarioModel&, const ScenarioModel&) = default;
};

/// Builtin coefficients for one of the six scenarios.
ScenarioModel builtin_model(Environment env, Density density);

/// Threshold of the highway NLOSv piecewise fits.
double highway_piecewise_threshold(Density density) noexcept;

/// Distance after applying the model's range policy.
struct ResolvedDistance {
    double value = 0.0;
    bool clamped = false;
};

/// Non-finite or non-positive d -> DomainError; 0 < d < d_min is raised to
/// d_min; d > d_max is an error or clamped per above_range.
ResolvedDistance resolve_distance(const ScenarioModel& model, double d);

} // namespace v2vlos
