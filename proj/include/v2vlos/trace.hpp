#pragma once

#include "v2vlos/los_state.hpp"
#include "v2vlos/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace v2vlos {

/// Seconds between consecutive trace steps. All transition probabilities are
/// per second, so no other spacing is accepted.
inline constexpr double kTimeStep = 1.0;

struct DistanceStep {
    double t = 0.0;
    double d = 0.0;

    friend bool operator==(const DistanceStep&, const DistanceStep&) = default;
};

/// Tx-Rx distance per one-second step.
class DistanceTrace {
public:
    DistanceTrace() = default;

    /// Throws DomainError unless t increases by exactly one second per step
    /// and every d is finite.
    explicit DistanceTrace(std::vector<DistanceStep> steps);

    static DistanceTrace from_distances(std::span<const double> distances, double t0 = 0.0);

    const std::vector<DistanceStep>& steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }
    const DistanceStep& operator[](std::size_t i) const noexcept { return steps_[i]; }

    friend bool operator==(const DistanceTrace&, const DistanceTrace&) = default;

private:
    std::vector<DistanceStep> steps_;
};

struct StateStep {
    double t = 0.0;
    double d = 0.0;
    LosState state = LosState::LOS;

    friend bool operator==(const StateStep&, const StateStep&) = default;
};

/// Labeled link trace. `scenario` and `seed` record provenance only.
struct StateTrace {
    std::vector<StateStep> steps;
    std::string scenario;
    RngSeed seed{};
    /// Number of steps whose distance was moved into the model's valid range.
    std::size_t clamped_steps = 0;

    std::size_t size() const noexcept { return steps.size(); }

    /// Throws DomainError on non-unit time spacing.
    void validate() const;

    DistanceTrace distances() const;

    friend bool operator==(const StateTrace&, const StateTrace&) = default;
};

} // namespace v2vlos
